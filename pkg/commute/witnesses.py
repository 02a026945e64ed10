"""Constructive witnesses beyond the table: connecting paths, involution
statistics, diagram automorphisms inverting representatives, and lifting a
witness to a diagram with larger bonds."""

import logging
from collections import deque
from collections.abc import Iterable
from dataclasses import asdict, dataclass

from core.config import application_config
from core.exceptions import DiagramParseError, DominanceError, NonSphericalError
from coxeter.diagram import (
    INF,
    CoxeterDiagram,
    Node,
    classify_spherical,
    generator_conjugacy_classes,
    parse_diagram,
    symmetry,
)
from coxeter.group import CoxeterGroup
from commute.certificates import Certificate, Method, Verdict
from commute.table import TableRow
from commute.verifiers import certificate, verify_cor26, verify_row_in

logger = logging.getLogger(__name__)


def _removed(d: CoxeterDiagram, subset: frozenset[Node]) -> list[Node]:
    return [s for s in d.nodes if s not in subset]


def connecting_path(d: CoxeterDiagram, subset: Iterable[Node]) -> tuple[Node, ...]:
    """Shortest s, s_1, ..., s_n, t with s != t outside I and every s_j in I."""
    chosen = frozenset(subset)
    outside = _removed(d, chosen)
    if len(outside) < 2:
        raise DiagramParseError(
            f"At least two nodes must lie outside I in {d}", removed=len(outside)
        )
    if not d.is_connected():
        raise DiagramParseError(f"{d} is not connected")
    best: tuple[Node, ...] | None = None
    for s in outside:
        previous: dict[Node, Node | None] = {s: None}
        queue = deque([s])
        while queue:
            current = queue.popleft()
            if current != s and current not in chosen:
                path = [current]
                while previous[path[-1]] is not None:
                    path.append(previous[path[-1]])
                candidate = tuple(reversed(path))
                if best is None or len(candidate) < len(best):
                    best = candidate
                break
            for t in d.neighbours(current):
                if t not in previous:
                    previous[t] = current
                    queue.append(t)
    assert best is not None
    return best


def claim1_witness(
    d: CoxeterDiagram,
    subset: Iterable[Node],
    guard: int | None = None,
    group: CoxeterGroup | None = None,
    case: str | None = None,
) -> Certificate:
    chosen = frozenset(subset)
    group = group or CoxeterGroup(d)
    group.require_spherical(chosen)
    path = connecting_path(d, chosen)
    result = verify_cor26(d, chosen, path[:1], path[1:-1], path[-1:], guard=guard, group=group, case=case)
    evidence = {**result.evidence, "path": d.format_word(path)}
    logger.info(f"Connecting path {d.format_word(path)} in {d}: {result.verdict.value}")
    return certificate(d, chosen, Method.CLAIM1, result.verdict, evidence, case)


@dataclass(frozen=True)
class InvolutionReport:
    diagram: str
    removed: str
    count: int
    quotient_sizes: list[int]
    representatives: list[str]
    lengths: list[int]
    involutions: list[bool]
    all_involutions: bool
    total: int
    pairing: list[dict]
    longest_length: int
    longest_I_length: int

    def to_dict(self) -> dict:
        return asdict(self)


def involution_report(d: CoxeterDiagram, i: Node | str, group: CoxeterGroup | None = None) -> InvolutionReport:
    """Double cosets of W_I in a finite W, I = S - {i}, with the pairing w -> w0·w."""
    node = i if isinstance(i, Node) else d.node(i)
    group = group or CoxeterGroup(d)
    if not group.is_finite():
        raise NonSphericalError(f"{d} is infinite; involution statistics need a finite group")
    subset = d.complement([node])
    records = group.double_cosets(subset)
    indices = group.subset_indices(subset)
    w0 = group.longest_id(tuple(range(group.rank)))
    w0_I = group.longest_id(indices)
    top = group.length_of(w0)
    top_I = group.length_of(w0_I)

    ids = [group.id_of(r.min_rep) for r in records]
    position = {eid: n for n, eid in enumerate(ids)}

    def longest_in(eid: int) -> int:
        record = records[position[eid]]
        inner = group.longest_id(group.subset_indices(record.stabilizer_subset))
        return 2 * top_I - group.length_of(inner) + group.length_of(eid)

    pairing = []
    for eid in ids:
        partner, _, _ = group.strip_to_minimal(group.multiply_ids(w0, eid), indices)
        pairing.append(
            {
                "representative": str(group.element(eid)),
                "partner": str(group.element(partner)),
                "partner_longest_length": longest_in(partner),
                "lengths_complement": longest_in(partner) == top - group.length_of(eid),
            }
        )
    report = InvolutionReport(
        diagram=d.name or d.to_spec(),
        removed=node.display,
        count=len(records),
        quotient_sizes=[r.left_quotient_size for r in records],
        representatives=[str(r.min_rep) for r in records],
        lengths=[r.min_rep.length for r in records],
        involutions=[r.involution for r in records],
        all_involutions=all(r.involution for r in records),
        total=sum(r.left_quotient_size for r in records),
        pairing=pairing,
        longest_length=top,
        longest_I_length=top_I,
    )
    logger.info(f"{report.count} double cosets in {d} for node {node.display}, all involutions: {report.all_involutions}")
    return report


def _class_preserving(d: CoxeterDiagram, permutation: dict[Node, Node]) -> bool:
    for members in generator_conjugacy_classes(d):
        if any(permutation[s] not in members for s in members):
            return False
    return True


def opposition_commutativity(
    d: CoxeterDiagram,
    subset: Iterable[Node],
    bound: int | None = None,
    group: CoxeterGroup | None = None,
    case: str | None = None,
) -> Certificate:
    """Look for a diagram automorphism pi with pi(I) = I and pi(w) = w^-1 on every representative.

    Such a pi gives a commutative algebra. Only representatives up to ``bound``
    are checked on an infinite group, so the verdict is then bounded.
    """
    chosen = frozenset(subset)
    group = group or CoxeterGroup(d)
    group.require_spherical(chosen)
    complete = bound is None and group.is_finite()
    if bound is None and not complete:
        bound = application_config.SCAN_MAX_LENGTH
    indices = group.subset_indices(chosen)
    reps = group.double_coset_ids(indices, None if complete else bound)

    candidates = [p for p in symmetry(d, fix=chosen).permutations() if _class_preserving(d, p)]
    candidates.sort(key=lambda p: (any(s != t for s, t in p.items()), sorted(p.items())))
    index = d.index
    rejected = []
    for permutation in candidates:
        failing = None
        for eid in reps:
            image = group.word_id(index[permutation[s]] for s in group.element(eid).word)
            if image != group.inverse_id(eid):
                failing = eid
                break
        mapping = {s.display: t.display for s, t in permutation.items()}
        if failing is None:
            evidence = {
                "automorphism": mapping,
                "bound": None if complete else bound,
                "checked": len(reps),
                "representatives": [str(group.element(x)) for x in reps],
            }
            verdict = Verdict.COMMUTATIVE if complete else Verdict.COMMUTATIVE_UP_TO_BOUND
            logger.info(f"Automorphism {mapping} inverts {len(reps)} representatives in {d}")
            return certificate(d, chosen, Method.AUTOMORPHISM, verdict, evidence, case)
        rejected.append({"automorphism": mapping, "failing": str(group.element(failing))})
    evidence = {
        "bound": None if complete else bound,
        "checked": len(reps),
        "rejected": rejected,
    }
    logger.info(f"No inverting automorphism found for {d}")
    return certificate(d, chosen, Method.AUTOMORPHISM, Verdict.INCONCLUSIVE, evidence, case)


@dataclass(frozen=True)
class ExplicitWitness:
    """A triple w = u·z·v over ``diagram`` with I = S - ``removed``."""

    diagram: CoxeterDiagram
    removed: tuple[str, ...]
    u: str
    z: str
    v: str


def check_dominance(source: CoxeterDiagram, target: CoxeterDiagram) -> list[dict]:
    """Bonds raised from source to target; raises if any bond decreased."""
    labels = sorted(s.display for s in source.nodes)
    if labels != sorted(t.display for t in target.nodes):
        raise DominanceError(
            f"{target} does not have the nodes of {source}",
            source=labels,
            target=sorted(t.display for t in target.nodes),
        )
    raised = []
    nodes = list(source.nodes)
    for n, s in enumerate(nodes):
        for t in nodes[n + 1 :]:
            before = source.m(s, t)
            after = target.m(target.node(s.display), target.node(t.display))
            if after < before:
                raise DominanceError(
                    f"Bond {s.display}-{t.display} decreases from {before} to {after}",
                    pair=[s.display, t.display],
                )
            if after > before:
                raised.append(
                    {
                        "pair": [s.display, t.display],
                        "from": "inf" if before == INF else int(before),
                        "to": "inf" if after == INF else int(after),
                    }
                )
    return raised


def lift_witness(
    source: TableRow | ExplicitWitness,
    target: CoxeterDiagram | str,
    guard: int | None = None,
    max_classes: int | None = None,
    max_steps: int | None = None,
) -> Certificate:
    """Re-run a witness in a diagram whose bonds are all at least the original ones."""
    goal = parse_diagram(target) if isinstance(target, str) else target
    if isinstance(source, TableRow):
        origin, removed, case = source.diagram, (source.i,), f"{source.row_id} -> {goal}"
    else:
        origin, removed, case = source.diagram, source.removed, f"{origin_name(source)} -> {goal}"
    raised = check_dominance(origin, goal)
    subset = goal.complement(removed)
    found = classify_spherical(goal, subset)
    if not found.finite:
        raise NonSphericalError(
            f"I = {goal.format_subset(subset)} is not spherical in {goal}",
            offending=goal.format_subset(found.offending),
        )
    group = CoxeterGroup(goal)
    if isinstance(source, TableRow):
        inner = verify_row_in(source, goal, guard, max_classes, max_steps, group)
    else:
        inner = verify_cor26(goal, subset, source.u, source.z, source.v, guard=guard, group=group)
    evidence = {
        "source": origin.name or origin.to_spec(),
        "target": goal.name or goal.to_spec(),
        "raised": raised,
        "embedded": inner.to_dict(),
    }
    logger.info(f"Lift {case}: {inner.verdict.value}")
    return certificate(goal, subset, Method.LIFT, inner.verdict, evidence, case)


def origin_name(witness: ExplicitWitness) -> str:
    return witness.diagram.name or witness.diagram.to_spec()
