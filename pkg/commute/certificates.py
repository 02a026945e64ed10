"""Self-contained verdict records with the evidence needed to re-check them."""

import json
from dataclasses import dataclass, field, replace
from typing import Any

from django.db import models

from core.exceptions import TableDataError


class Verdict(models.TextChoices):
    NONCOMMUTATIVE = "noncommutative", "noncommutative"
    COMMUTATIVE = "commutative", "commutative"
    COMMUTATIVE_UP_TO_BOUND = "commutative-up-to-bound", "commutative up to bound"
    INCONCLUSIVE = "inconclusive", "inconclusive"


class Method(models.TextChoices):
    DIRECT = "direct-commutator", "direct commutator scan"
    COR26 = "cor2.6", "decomposition search"
    PROP27 = "prop2.7", "heap certificate"
    STAR = "star-pattern", "heap pattern predicate"
    CLAIM1 = "claim1", "two removed nodes"
    AUTOMORPHISM = "automorphism", "opposition automorphism"
    LIFT = "lift", "bond increase"


@dataclass(frozen=True)
class Certificate:
    case: str
    diagram: str
    subset: tuple[str, ...]
    method: Method
    verdict: Verdict
    evidence: dict[str, Any] = field(default_factory=dict)

    @property
    def decided(self) -> bool:
        return self.verdict != Verdict.INCONCLUSIVE

    def with_case(self, case: str) -> "Certificate":
        return replace(self, case=case)

    def to_dict(self) -> dict[str, Any]:
        return {
            "case": self.case,
            "diagram": self.diagram,
            "subset": list(self.subset),
            "method": str(self.method.value),
            "verdict": str(self.verdict.value),
            "evidence": self.evidence,
        }

    def to_json(self, indent: int | None = None) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=indent, ensure_ascii=False)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "Certificate":
        try:
            return cls(
                case=str(data["case"]),
                diagram=str(data["diagram"]),
                subset=tuple(str(s) for s in data["subset"]),
                method=Method(data["method"]),
                verdict=Verdict(data["verdict"]),
                evidence=dict(data.get("evidence") or {}),
            )
        except (KeyError, ValueError, TypeError) as exc:
            raise TableDataError(f"Malformed certificate: {exc}") from None

    @classmethod
    def from_json(cls, text: str) -> "Certificate":
        try:
            return cls.from_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise TableDataError(f"Certificate is not valid JSON: {exc}") from None

    def summary(self) -> str:
        return f"{self.case}: {self.verdict.value} ({self.method.value})"
