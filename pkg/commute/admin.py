from django.contrib import admin
from django.db.models import QuerySet
from django.http import HttpRequest

from commute.models import CertificateRecord
from commute.recheck import recheck


@admin.register(CertificateRecord)
class CertificateRecordAdmin(admin.ModelAdmin):  # type: ignore[type-arg]
    list_display = ["case", "diagram", "method", "verdict", "rechecked", "created_at"]
    list_filter = ["verdict", "method", "rechecked", "created_at"]
    search_fields = ["case", "diagram"]
    readonly_fields = ["id", "created_at"]
    actions = ["recheck_certificates"]

    @admin.action(description="Re-check selected certificates")
    def recheck_certificates(
        self, request: HttpRequest, queryset: QuerySet[CertificateRecord]
    ) -> None:
        reproduced = 0
        for record in queryset:
            result = recheck(record.to_certificate())
            record.rechecked = result.reproduced
            record.save(update_fields=["rechecked"])
            reproduced += int(result.reproduced)
        self.message_user(
            request, f"{reproduced} of {queryset.count()} certificate(s) reproduced."
        )
