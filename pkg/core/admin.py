from django.contrib import admin
from django.contrib.admin import AdminSite
from django.http import HttpRequest


class SuperuserAdminSite(AdminSite):
    """Stored certificates are only visible to superusers."""

    def has_permission(self, request: HttpRequest) -> bool:
        return request.user.is_active and request.user.is_superuser


admin.site.__class__ = SuperuserAdminSite
admin.site.site_header = "Hecke Commute Certificates"
admin.site.site_title = "Hecke Commute"
admin.site.index_title = "Certificates and re-checks"
