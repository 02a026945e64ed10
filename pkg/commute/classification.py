"""Known answer for which parabolic algebras are commutative.

The answer is data, kept apart from the computed certificates: for a
connected diagram with one removed node it is a list of spherical cases plus
the special-vertex rule for affine diagrams; removing two or more nodes of a
connected diagram always gives a noncommutative algebra. Disconnected
diagrams are answered one component at a time.
"""

import logging
from collections.abc import Iterable
from dataclasses import dataclass, field

from core.exceptions import HeckeError, NonSphericalError
from coxeter import catalog
from coxeter.diagram import (
    CoxeterDiagram,
    FiniteTypeDecomposition,
    Node,
    classify_spherical,
    find_isomorphism,
    parse_diagram,
    special_vertices,
)
from commute.certificates import Verdict

logger = logging.getLogger(__name__)

SPHERICAL_LIST = "spherical-list"
AFFINE_SPECIAL = "affine-special-vertex"
SEVERAL_REMOVED = "several-removed"
INFINITE_NON_AFFINE = "infinite-non-affine"
TRIVIAL_FACTOR = "trivial-factor"
PRODUCT = "product"

COMMUTATIVE_EXCEPTIONAL: dict[str, frozenset[int]] = {
    "E6": frozenset({1, 2, 6}),
    "E7": frozenset({1, 2, 7}),
    "E8": frozenset({1, 8}),
    "F4": frozenset({1, 4}),
    "H3": frozenset({1, 3}),
    "H4": frozenset({1}),
}


@dataclass(frozen=True)
class Classification:
    verdict: Verdict
    rule: str
    theorem_level: bool = False
    provenance: dict = field(default_factory=dict)

    @property
    def commutative(self) -> bool:
        return self.verdict == Verdict.COMMUTATIVE

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "rule": self.rule,
            "theorem_level": self.theorem_level,
            "provenance": self.provenance,
        }


def spherical_commutative(family: str, rank: int, i: int) -> bool:
    if family in ("A", "B") or family.startswith("I2"):
        return True
    if family == "D":
        return i <= rank / 2 or i in (rank - 1, rank)
    return i in COMMUTATIVE_EXCEPTIONAL[family]


def affine_match(component: CoxeterDiagram) -> tuple[str, int, dict[Node, Node]] | None:
    """The named affine diagram isomorphic to ``component`` and the node map into it."""
    rank = component.rank - 1
    for family in catalog.AFFINE_FAMILIES:
        if rank < 1 or not catalog.rank_in_range(family, rank):
            continue
        named = parse_diagram(f"{family}{rank}")
        mapping = find_isomorphism(component, named)
        if mapping is not None:
            return family, rank, mapping
    return None


def _single(component: CoxeterDiagram, node: Node) -> Classification:
    found = classify_spherical(component)
    if isinstance(found, FiniteTypeDecomposition):
        (irreducible,) = found.components
        label = next(i for i, s in irreducible.correspondence if s == node)
        commutative = spherical_commutative(irreducible.family, irreducible.rank, label)
        return Classification(
            Verdict.COMMUTATIVE if commutative else Verdict.NONCOMMUTATIVE,
            SPHERICAL_LIST,
            provenance={"type": irreducible.name, "i": label},
        )
    matched = affine_match(component)
    if matched is not None:
        family, rank, mapping = matched
        named = parse_diagram(f"{family}{rank}")
        image = mapping[node]
        special = special_vertices(named)
        return Classification(
            Verdict.COMMUTATIVE if image in special else Verdict.NONCOMMUTATIVE,
            AFFINE_SPECIAL,
            provenance={
                "type": f"{family}{rank}",
                "i": image.display,
                "special": named.format_subset(special),
            },
        )
    return Classification(
        Verdict.NONCOMMUTATIVE,
        INFINITE_NON_AFFINE,
        theorem_level=True,
        provenance={"i": node.display},
    )


def select_subset(
    diagram: CoxeterDiagram,
    removed: Iterable[str | Node] | None = None,
    subset: Iterable[str | Node] | None = None,
) -> frozenset[Node]:
    if (removed is None) == (subset is None):
        raise HeckeError("Give exactly one of removed nodes or subset")
    if subset is not None:
        return diagram.subset(subset)
    return diagram.complement(removed or ())


def classify(
    d: CoxeterDiagram | str,
    removed: Iterable[str | Node] | None = None,
    subset: Iterable[str | Node] | None = None,
) -> Classification:
    """Answer commutativity of the parabolic algebra for I = S - removed (or I = subset)."""
    diagram = parse_diagram(d) if isinstance(d, str) else d
    chosen = select_subset(diagram, removed, subset)
    found = classify_spherical(diagram, chosen)
    if not found.finite:
        raise NonSphericalError(
            f"I = {diagram.format_subset(chosen)} is not spherical in {diagram}",
            offending=diagram.format_subset(found.offending),
        )

    parts = []
    for nodes in diagram.components():
        outside = [s for s in nodes if s not in chosen]
        names = diagram.format_word(nodes)
        if not outside:
            part = Classification(Verdict.COMMUTATIVE, TRIVIAL_FACTOR)
        elif len(outside) > 1:
            part = Classification(
                Verdict.NONCOMMUTATIVE,
                SEVERAL_REMOVED,
                provenance={"removed": [s.display for s in outside]},
            )
        else:
            part = _single(diagram.induced(nodes), outside[0])
        parts.append((names, part))

    if len(parts) == 1:
        result = parts[0][1]
    else:
        noncommutative = [part for _, part in parts if part.verdict == Verdict.NONCOMMUTATIVE]
        result = Classification(
            Verdict.NONCOMMUTATIVE if noncommutative else Verdict.COMMUTATIVE,
            PRODUCT,
            theorem_level=any(part.theorem_level for _, part in parts),
            provenance={
                "components": [{"nodes": names, **part.to_dict()} for names, part in parts]
            },
        )
    logger.info(f"Classified {diagram} with I = {diagram.format_subset(chosen)}: {result.verdict.value} ({result.rule})")
    return result
