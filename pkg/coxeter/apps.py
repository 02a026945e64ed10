from django.apps import AppConfig


class CoxeterConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "coxeter"
    verbose_name = "Coxeter groups"
