from django.apps import AppConfig


class CommuteConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "commute"
    verbose_name = "Parabolic Hecke commutativity"
