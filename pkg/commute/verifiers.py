"""Noncommutativity certificates from explicit words.

Two independent routes are offered. The decomposition search looks for a
factorisation ``w = v'z'u'`` with ``u' <= u``, ``v' <= v`` and ``z'`` in
W_I; if none exists the algebra is noncommutative. The heap certificate
inspects every commutation class of ``w`` and asks that the anchor letter
``i`` occurs minimally often and that ``k`` never separates its first two
occurrences. Star rows replace the second condition by a count of ``k``
between the last two occurrences.
"""

import logging
from collections.abc import Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from core.config import application_config
from core.exceptions import ClosureLimitError, GuardExceededError, MalformedWitnessError
from coxeter.diagram import CoxeterDiagram, Node
from coxeter.group import IDENTITY, CoxeterGroup
from coxeter.heaps import CommutationClass, between_counts, braid_closure
from commute.certificates import Certificate, Method, Verdict
from commute.table import Params, TableRow

logger = logging.getLogger(__name__)

Word = tuple[Node, ...]


def _case(d: CoxeterDiagram, subset: Iterable[Node], case: str | None) -> str:
    if case:
        return case
    removed = [s for s in d.nodes if s not in set(subset)]
    return f"{d}, I = S - {{{', '.join(s.display for s in removed)}}}"


def certificate(
    d: CoxeterDiagram,
    subset: Iterable[Node],
    method: Method,
    verdict: Verdict,
    evidence: dict,
    case: str | None = None,
) -> Certificate:
    chosen = frozenset(subset)
    return Certificate(
        case=_case(d, chosen, case),
        diagram=d.name or d.to_spec(),
        subset=tuple(d.format_subset(chosen)),
        method=method,
        verdict=verdict,
        evidence=evidence,
    )


@dataclass(frozen=True)
class Witness:
    """Checked words for ``w = u·z·v`` with w reduced and I-reduced and z in W_I."""

    group: CoxeterGroup
    subset: frozenset[Node]
    u: Word
    z: Word
    v: Word

    @property
    def word(self) -> Word:
        return self.u + self.z + self.v

    def text(self, word: Sequence[Node]) -> str:
        return self.group.diagram.format_word(word)

    def ids(self) -> tuple[int, int, int, int]:
        g = self.group
        return g.id_of_word(self.u), g.id_of_word(self.z), g.id_of_word(self.v), g.id_of_word(self.word)

    def reduced_ids(self) -> tuple[int, int, int]:
        """(u0, z0, v0) with u0, v0 I-reduced and w = u0·z0·v0 reduced.

        u loses its trailing W_I letters and v its leading ones; both move into z.
        """
        g = self.group
        indices = g.subset_indices(self.subset)
        uid, zid, vid, _ = self.ids()
        u0, v0 = uid, vid
        tail, head = IDENTITY, IDENTITY
        while (s := next((s for s in indices if g.is_right_descent(u0, s)), None)) is not None:
            u0 = g.right_multiply(u0, s)
            tail = g.left_multiply(s, tail)
        while (s := next((s for s in indices if g.is_left_descent(v0, s)), None)) is not None:
            v0 = g.left_multiply(s, v0)
            head = g.right_multiply(head, s)
        return u0, g.multiply_ids(g.multiply_ids(tail, zid), head), v0


def check_witness(
    group: CoxeterGroup,
    subset: Iterable[Node],
    u: Sequence[Node] | str,
    z: Sequence[Node] | str,
    v: Sequence[Node] | str,
) -> Witness:
    d = group.diagram
    chosen = frozenset(subset)
    parts = tuple(d.parse_word(x) for x in (u, z, v))
    witness = Witness(group, chosen, *parts)
    indices = group.subset_indices(chosen)
    wid = witness.ids()[3]
    total = len(witness.word)
    if group.length_of(wid) != total:
        raise MalformedWitnessError(
            f"{witness.text(witness.word)} is not reduced (lengths are not additive)",
            word=witness.text(witness.word),
        )
    if any(s not in chosen for s in witness.z):
        raise MalformedWitnessError(f"{witness.text(witness.z)} is not in W_I", z=witness.text(witness.z))
    if not group.is_reduced_for(wid, indices):
        raise MalformedWitnessError(f"w = {group.element(wid)} is not I-reduced", part="w")
    return witness


def find_decomposition(
    group: CoxeterGroup,
    wid: int,
    lower_u: set[int],
    lower_v: set[int],
    subset: Iterable[int],
) -> tuple[int, int, int] | None:
    """Some (v', z', u') with w = v'z'u' reduced and z' in W_I, or None."""
    inside = frozenset(subset)
    lw = group.length_of(wid)
    by_length = sorted(lower_u, key=group.length_of)
    inverses: dict[int, int] = {}
    for vp in sorted(lower_v, key=group.length_of):
        lv = group.length_of(vp)
        left = group.multiply_ids(group.inverse_id(vp), wid)
        if group.length_of(left) != lw - lv:
            continue
        for up in by_length:
            lu = group.length_of(up)
            if lv + lu > lw:
                break
            if up not in inverses:
                inverses[up] = group.inverse_id(up)
            zp = group.multiply_ids(left, inverses[up])
            if group.length_of(zp) == lw - lv - lu and group.in_parabolic(zp, inside):
                return vp, zp, up
    return None


def verify_cor26(
    d: CoxeterDiagram,
    subset: Iterable[Node],
    u: Sequence[Node] | str,
    z: Sequence[Node] | str,
    v: Sequence[Node] | str,
    guard: int | None = None,
    group: CoxeterGroup | None = None,
    case: str | None = None,
) -> Certificate:
    group = group or CoxeterGroup(d)
    guard = guard or application_config.BRUHAT_GUARD
    witness = check_witness(group, subset, u, z, v)
    wid = witness.ids()[3]
    uid, zid, vid = witness.reduced_ids()
    evidence: dict = {
        "u": witness.text(witness.u),
        "z": witness.text(witness.z),
        "v": witness.text(witness.v),
        "w": witness.text(witness.word),
        "guard": guard,
    }
    if group.length_of(zid) != len(witness.z):
        evidence["reduced_parts"] = {
            "u": str(group.element(uid)),
            "z": str(group.element(zid)),
            "v": str(group.element(vid)),
        }
    try:
        lower_u = group.lower_ids(uid, guard)
        lower_v = group.lower_ids(vid, guard)
    except GuardExceededError as exc:
        logger.warning(f"Bruhat interval too large for {evidence['w']}: {exc.message}")
        evidence["reason"] = "guard_exceeded"
        evidence["interval_size"] = exc.details.get("size")
        return certificate(d, witness.subset, Method.COR26, Verdict.INCONCLUSIVE, evidence, case)

    evidence["lower_u"] = len(lower_u)
    evidence["lower_v"] = len(lower_v)
    found = find_decomposition(group, wid, lower_u, lower_v, group.subset_indices(witness.subset))
    if found is None:
        evidence["decomposition"] = None
        verdict = Verdict.NONCOMMUTATIVE
    else:
        vp, zp, up = found
        evidence["decomposition"] = {
            "v'": str(group.element(vp)),
            "z'": str(group.element(zp)),
            "u'": str(group.element(up)),
        }
        verdict = Verdict.INCONCLUSIVE
    logger.info(f"Decomposition search for {evidence['w']}: {verdict.value}")
    return certificate(d, witness.subset, Method.COR26, verdict, evidence, case)


def _closure(witness: Witness, max_classes: int | None, max_steps: int | None) -> list[CommutationClass]:
    return braid_closure(
        witness.group.diagram,
        witness.word,
        max_classes=max_classes,
        max_steps=max_steps,
        group=witness.group,
    )


def _heap_witness(
    group: CoxeterGroup,
    subset: Iterable[Node],
    u: Sequence[Node] | str,
    w_I: Sequence[Node] | str,
    i: Node,
    k: Node,
    k_outside_u: bool = True,
) -> Witness:
    witness = check_witness(group, subset, u, w_I, (i,))
    if i in witness.subset:
        raise MalformedWitnessError(f"{i.display} must lie outside I", i=i.display)
    if k not in witness.z or (k_outside_u and k in witness.u):
        raise MalformedWitnessError(
            f"{k.display} must occur in w_I" + (" and not in u" if k_outside_u else ""), k=k.display
        )
    return witness


def prop27_predicate(
    classes: Sequence[CommutationClass], given: int, i: Node, k: Node
) -> dict:
    fewest = min(c.count(i) for c in classes)
    minimal = [c for c in classes if c.count(i) == fewest]
    violating = next(
        (c for c in minimal if between_counts(c, i, "first-two", k)["possible"] > 0), None
    )
    return {
        "i_count": given,
        "minimal_i_count": fewest,
        "condition_1": given == fewest,
        "condition_2": violating is None,
        "violating_class": str(violating) if violating is not None else None,
    }


def side_bound(u: Word, i: Node, k: Node, fewest: int) -> int | None:
    """Most k letters between the last two i letters of any i·z'·u' with u' <= u.

    None when such an expression could have a single i inside u', so that z'
    would sit between the last two i letters.
    """
    if fewest - 1 < 2:
        return None
    positions = [p for p, s in enumerate(u) if s == i]
    best = -1
    for a in range(max(0, fewest - 3), len(positions)):
        for b in range(a + 1, len(positions)):
            between = sum(1 for s in u[positions[a] + 1 : positions[b]] if s == k)
            best = max(best, between)
    return best


def star_predicate(
    classes: Sequence[CommutationClass], given: int, u: Word, i: Node, k: Node, at_least: int
) -> dict:
    fewest = min(c.count(i) for c in classes)
    forced = [between_counts(c, i, "last-two", k)["forced"] for c in classes]
    bound = side_bound(u, i, k, fewest)
    return {
        "i_count": given,
        "minimal_i_count": fewest,
        "condition_1": given == fewest,
        "forced_counts": forced,
        "at_least": at_least,
        "forced_holds": min(forced) >= at_least,
        "hypothetical_bound": bound,
        "bound_holds": bound is not None and at_least > bound,
    }


def _closure_or_inconclusive(
    witness: Witness, max_classes: int | None, max_steps: int | None, evidence: dict
) -> list[CommutationClass] | None:
    try:
        classes = _closure(witness, max_classes, max_steps)
    except ClosureLimitError as exc:
        evidence["reason"] = "limit_exceeded"
        evidence["partial_classes"] = len(exc.partial)
        return None
    evidence["classes"] = [str(c) for c in classes]
    evidence["class_count"] = len(classes)
    return classes


def verify_prop27(
    d: CoxeterDiagram,
    subset: Iterable[Node],
    u: Sequence[Node] | str,
    w_I: Sequence[Node] | str,
    i: Node | str,
    k: Node | str,
    max_classes: int | None = None,
    max_steps: int | None = None,
    group: CoxeterGroup | None = None,
    case: str | None = None,
    method: Method = Method.PROP27,
) -> Certificate:
    group = group or CoxeterGroup(d)
    i_node = i if isinstance(i, Node) else d.node(i)
    k_node = k if isinstance(k, Node) else d.node(k)
    witness = _heap_witness(group, subset, u, w_I, i_node, k_node, k_outside_u=method != Method.STAR)
    evidence: dict = {
        "u": witness.text(witness.u),
        "w_I": witness.text(witness.z),
        "i": i_node.display,
        "k": k_node.display,
        "w": witness.text(witness.word),
        "anchor": "first-two",
    }
    classes = _closure_or_inconclusive(witness, max_classes, max_steps, evidence)
    if classes is None:
        return certificate(d, witness.subset, method, Verdict.INCONCLUSIVE, evidence, case)
    checks = prop27_predicate(classes, witness.word.count(i_node), i_node, k_node)
    evidence.update(checks)
    holds = checks["condition_1"] and checks["condition_2"]
    verdict = Verdict.NONCOMMUTATIVE if holds else Verdict.INCONCLUSIVE
    logger.info(f"Heap certificate for {evidence['w']}: {len(classes)} classes, {verdict.value}")
    return certificate(d, witness.subset, method, verdict, evidence, case)


def verify_star(
    d: CoxeterDiagram,
    subset: Iterable[Node],
    u: Sequence[Node] | str,
    w_I: Sequence[Node] | str,
    i: Node | str,
    k: Node | str,
    at_least: int,
    max_classes: int | None = None,
    max_steps: int | None = None,
    group: CoxeterGroup | None = None,
    case: str | None = None,
) -> Certificate:
    group = group or CoxeterGroup(d)
    i_node = i if isinstance(i, Node) else d.node(i)
    k_node = k if isinstance(k, Node) else d.node(k)
    witness = _heap_witness(group, subset, u, w_I, i_node, k_node, k_outside_u=False)
    evidence: dict = {
        "u": witness.text(witness.u),
        "w_I": witness.text(witness.z),
        "i": i_node.display,
        "k": k_node.display,
        "w": witness.text(witness.word),
        "anchor": "last-two",
    }
    classes = _closure_or_inconclusive(witness, max_classes, max_steps, evidence)
    if classes is None:
        return certificate(d, witness.subset, Method.STAR, Verdict.INCONCLUSIVE, evidence, case)
    checks = star_predicate(
        classes, witness.word.count(i_node), witness.u, i_node, k_node, at_least
    )
    evidence.update(checks)
    holds = checks["condition_1"] and checks["forced_holds"] and checks["bound_holds"]
    verdict = Verdict.NONCOMMUTATIVE if holds else Verdict.INCONCLUSIVE
    logger.info(f"Pattern certificate for {evidence['w']}: {len(classes)} classes, {verdict.value}")
    return certificate(d, witness.subset, Method.STAR, verdict, evidence, case)


def verify_row_in(
    row: TableRow,
    d: CoxeterDiagram,
    guard: int | None = None,
    max_classes: int | None = None,
    max_steps: int | None = None,
    group: CoxeterGroup | None = None,
) -> Certificate:
    """Run the row's own argument with its words read in the diagram ``d``."""
    group = group or CoxeterGroup(d)
    u, w_I, i, k = (d.parse_word(row.u), d.parse_word(row.w_I), d.node(row.i), d.node(row.k))
    subset = d.complement([i])
    limits = {"max_classes": max_classes, "max_steps": max_steps, "group": group, "case": row.row_id}
    if not row.star:
        return verify_prop27(d, subset, u, w_I, i, k, **limits)
    if row.anchor == "first-two":
        result = verify_prop27(d, subset, u, w_I, i, k, method=Method.STAR, **limits)
    else:
        assert row.at_least is not None
        result = verify_star(d, subset, u, w_I, i, k, row.at_least, **limits)
    second = verify_cor26(d, subset, u, w_I, (i,), guard=guard, group=group, case=row.row_id)
    result.evidence["cor26"] = {
        "verdict": second.verdict.value,
        **{key: second.evidence[key] for key in ("lower_u", "lower_v", "reason") if key in second.evidence},
    }
    return result


def verify_table_row(
    row: TableRow,
    params: Params | None = None,
    guard: int | None = None,
    max_classes: int | None = None,
    max_steps: int | None = None,
) -> Certificate:
    instance = row.instantiate(params)
    d = instance.diagram
    group = CoxeterGroup(d)
    instance.validate(group)
    result = verify_row_in(instance, d, guard, max_classes, max_steps, group)
    expected = instance.expected_classes
    if expected is not None:
        result.evidence["expected_classes"] = expected
        if result.evidence.get("class_count") != expected:
            logger.warning(
                f"Row {instance.row_id}: {result.evidence.get('class_count')} classes, expected {expected}"
            )
    if instance.params:
        result.evidence["params"] = dict(instance.params)
    logger.info(f"Row {instance.row_id}: {result.verdict.value}")
    return result


def verify_table(
    rows: Iterable[TableRow],
    max_rank: int | None = None,
    threads: int | None = None,
    guard: int | None = None,
    max_classes: int | None = None,
    max_steps: int | None = None,
) -> list[Certificate]:
    """Every fixed row and every in-range instance of the parametrized rows, sorted by case."""
    jobs = [instance for row in rows for instance in row.instances(max_rank)]
    threads = threads or application_config.THREADS

    def run(instance: TableRow) -> Certificate:
        return verify_table_row(instance, None, guard, max_classes, max_steps)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, jobs))
    else:
        results = [run(job) for job in jobs]
    return sorted(results, key=lambda c: c.case)
