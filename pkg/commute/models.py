import uuid

from django.db import models

from commute.certificates import Certificate, Method, Verdict


class CertificateRecord(models.Model):
    id = models.UUIDField(
        primary_key=True, default=uuid.uuid4, unique=True, editable=False
    )
    case = models.CharField(max_length=200)
    diagram = models.CharField(max_length=500)
    subset = models.JSONField(default=list)
    method = models.CharField(choices=Method.choices, max_length=30)
    verdict = models.CharField(choices=Verdict.choices, max_length=30)
    evidence = models.JSONField(default=dict)
    rechecked = models.BooleanField(default=False)
    created_at = models.DateTimeField(auto_now_add=True)

    class Meta:
        ordering = ["case", "-created_at"]

    def __str__(self) -> str:
        return f"{self.case}: {self.verdict}"

    def to_certificate(self) -> Certificate:
        return Certificate(
            case=self.case,
            diagram=self.diagram,
            subset=tuple(self.subset),
            method=Method(self.method),
            verdict=Verdict(self.verdict),
            evidence=dict(self.evidence),
        )


def save_certificate(cert: Certificate) -> CertificateRecord:
    return CertificateRecord.objects.create(
        case=cert.case,
        diagram=cert.diagram,
        subset=list(cert.subset),
        method=cert.method.value,
        verdict=cert.verdict.value,
        evidence=cert.evidence,
    )
