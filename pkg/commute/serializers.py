from typing import Any

from rest_framework import serializers

from commute.models import CertificateRecord


class DiagramRequestSerializer(serializers.Serializer):
    """A diagram plus the parabolic subset, given as removed nodes or as I itself."""

    diagram = serializers.CharField(
        max_length=500, help_text='Diagram name, e.g. "E6", "~G2", "D5^{3}"'
    )
    remove = serializers.ListField(
        child=serializers.CharField(max_length=8),
        required=False,
        help_text="Node labels outside I",
    )
    subset = serializers.ListField(
        child=serializers.CharField(max_length=8),
        required=False,
        help_text="Node labels of I",
    )

    def validate(self, attrs: dict[str, Any]) -> dict[str, Any]:
        if ("remove" in attrs) == ("subset" in attrs):
            raise serializers.ValidationError(
                "Exactly one of 'remove' and 'subset' is required."
            )
        attrs["diagram"] = attrs["diagram"].strip()
        return attrs


class CosetsRequestSerializer(DiagramRequestSerializer):
    max_length = serializers.IntegerField(
        required=False,
        min_value=0,
        max_value=40,
        help_text="Length bound, required for infinite groups",
    )


class PoincareRequestSerializer(serializers.Serializer):
    diagram = serializers.CharField(max_length=500)
    subset = serializers.ListField(
        child=serializers.CharField(max_length=8),
        required=False,
        help_text="Node labels of J; the whole diagram when omitted",
    )


class TableVerifyRequestSerializer(serializers.Serializer):
    row = serializers.CharField(max_length=100, help_text='Row id, e.g. "H_{4,4}"')
    params = serializers.DictField(
        child=serializers.IntegerField(min_value=0),
        required=False,
        help_text="Family parameters, e.g. {\"n\": 7, \"i\": 5}",
    )
    background = serializers.BooleanField(default=False)


class RecheckRequestSerializer(serializers.Serializer):
    certificate = serializers.JSONField(
        help_text="A certificate as returned by any verification endpoint"
    )

    def validate_certificate(self, value: Any) -> dict[str, Any]:
        if not isinstance(value, dict):
            raise serializers.ValidationError("Certificate must be a JSON object.")
        return value


class ClassificationResponseSerializer(serializers.Serializer):
    verdict = serializers.CharField()
    rule = serializers.CharField()
    theorem_level = serializers.BooleanField()
    provenance = serializers.DictField()


class DoubleCosetSerializer(serializers.Serializer):
    min_rep = serializers.CharField()
    length = serializers.IntegerField()
    stabilizer_subset = serializers.ListField(child=serializers.CharField())
    coset_size = serializers.IntegerField()
    left_quotient_size = serializers.IntegerField()
    involution = serializers.BooleanField()


class PoincareResponseSerializer(serializers.Serializer):
    diagram = serializers.CharField()
    subset = serializers.ListField(child=serializers.CharField())
    polynomial = serializers.CharField()
    variables = serializers.DictField()


class CertificateRecordSerializer(serializers.ModelSerializer):
    class Meta:
        model = CertificateRecord
        fields = [
            "id",
            "case",
            "diagram",
            "subset",
            "method",
            "verdict",
            "evidence",
            "rechecked",
            "created_at",
        ]


class RecheckResponseSerializer(serializers.Serializer):
    case = serializers.CharField()
    method = serializers.CharField()
    recorded = serializers.CharField()
    verdict = serializers.CharField()
    reproduced = serializers.BooleanField()
    notes = serializers.ListField(child=serializers.CharField())


class QueuedResponseSerializer(serializers.Serializer):
    status = serializers.CharField()
    row = serializers.CharField()


class ErrorResponseSerializer(serializers.Serializer):
    error = serializers.CharField()
    message = serializers.CharField()
    details = serializers.DictField(required=False)
