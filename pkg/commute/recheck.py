"""Re-verify a stored certificate from its recorded evidence."""

import logging
from dataclasses import dataclass, field

from core.exceptions import HeckeError
from coxeter.diagram import CoxeterDiagram, Node, parse_diagram
from coxeter.group import CoxeterGroup
from coxeter.heaps import CommutationClass, braid_moves, commutation_canonical
from hecke.algebra import ParabolicHeckeAlgebra
from commute.certificates import Certificate, Method, Verdict
from commute.scan import commutator_mismatch, direct_commutativity_scan
from commute.verifiers import prop27_predicate, star_predicate, verify_cor26
from commute.witnesses import check_dominance, connecting_path, opposition_commutativity

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RecheckResult:
    case: str
    method: Method
    recorded: Verdict
    verdict: Verdict
    notes: list[str] = field(default_factory=list)

    @property
    def reproduced(self) -> bool:
        return self.recorded == self.verdict

    def to_dict(self) -> dict:
        return {
            "case": self.case,
            "method": self.method.value,
            "recorded": self.recorded.value,
            "verdict": self.verdict.value,
            "reproduced": self.reproduced,
            "notes": self.notes,
        }


def _context(cert: Certificate) -> tuple[CoxeterDiagram, frozenset[Node]]:
    d = parse_diagram(cert.diagram)
    return d, d.subset(cert.subset)


def _cor26(cert: Certificate, notes: list[str]) -> Verdict:
    d, subset = _context(cert)
    e = cert.evidence
    result = verify_cor26(d, subset, e["u"], e["z"], e["v"], guard=e.get("guard"))
    if result.evidence.get("decomposition") != e.get("decomposition"):
        notes.append("decomposition differs from the recorded one")
    return result.verdict


def _recorded_classes(
    d: CoxeterDiagram, group: CoxeterGroup, cert: Certificate, notes: list[str]
) -> list[CommutationClass] | None:
    """Rebuild the recorded classes and confirm they are closed under braid moves."""
    e = cert.evidence
    if "classes" not in e:
        notes.append(f"no classes recorded ({e.get('reason', 'unknown')})")
        return None
    target = group.id_of_word(d.parse_word(e["w"]))
    classes = []
    for text in e["classes"]:
        c = commutation_canonical(d, text, group)
        if str(c) != text:
            notes.append(f"{text} is not in commutation normal form")
            return None
        if group.id_of_word(c.canonical_word) != target:
            notes.append(f"{text} is not an expression of {e['w']}")
            return None
        classes.append(c)
    known = {c.canonical_word for c in classes}
    if commutation_canonical(d, e["w"], group).canonical_word not in known:
        notes.append("the given expression is missing from the recorded classes")
        return None
    for c in classes:
        for moved in braid_moves(c):
            if commutation_canonical(d, moved, group).canonical_word not in known:
                notes.append(f"a braid move leaves the recorded classes from {c}")
                return None
    return classes


def _heap(cert: Certificate, notes: list[str]) -> Verdict:
    d, _ = _context(cert)
    group = CoxeterGroup(d)
    e = cert.evidence
    classes = _recorded_classes(d, group, cert, notes)
    if classes is None:
        return Verdict.INCONCLUSIVE
    i, k = d.node(e["i"]), d.node(e["k"])
    given = d.parse_word(e["w"]).count(i)
    if e.get("anchor") == "last-two":
        checks = star_predicate(classes, given, d.parse_word(e["u"]), i, k, int(e["at_least"]))
        holds = checks["condition_1"] and checks["forced_holds"] and checks["bound_holds"]
    else:
        checks = prop27_predicate(classes, given, i, k)
        holds = checks["condition_1"] and checks["condition_2"]
    return Verdict.NONCOMMUTATIVE if holds else Verdict.INCONCLUSIVE


def _direct(cert: Certificate, notes: list[str]) -> Verdict:
    d, subset = _context(cert)
    witness = cert.evidence.get("witness")
    if witness is None:
        notes.append("no witness recorded; scan repeated")
        return direct_commutativity_scan(d, subset, bound=cert.evidence.get("bound")).verdict
    algebra = ParabolicHeckeAlgebra.for_diagram(d, subset)
    group = algebra.group
    u, v = group(witness["u"]), group(witness["v"])
    found = commutator_mismatch(algebra, u, v)
    if found is None:
        notes.append("recorded pair commutes")
        return Verdict.INCONCLUSIVE
    if found["w"] != witness["w"]:
        notes.append(f"first mismatch at {found['w']}, recorded {witness['w']}")
    return Verdict.NONCOMMUTATIVE


def _claim1(cert: Certificate, notes: list[str]) -> Verdict:
    d, subset = _context(cert)
    path = d.format_word(connecting_path(d, subset))
    if path != cert.evidence.get("path"):
        notes.append(f"shortest path is {path}, recorded {cert.evidence.get('path')}")
    return _cor26(cert, notes)


def _automorphism(cert: Certificate, notes: list[str]) -> Verdict:
    d, subset = _context(cert)
    e = cert.evidence
    if "automorphism" not in e:
        notes.append("no automorphism recorded; search repeated")
        return opposition_commutativity(d, subset, bound=e.get("bound")).verdict
    group = CoxeterGroup(d)
    index = d.index
    permutation = {d.node(s): d.node(t) for s, t in e["automorphism"].items()}
    if {permutation[s] for s in subset} != set(subset):
        notes.append("automorphism does not preserve I")
        return Verdict.INCONCLUSIVE
    reps = group.double_coset_ids(group.subset_indices(subset), e.get("bound"))
    if len(reps) != e.get("checked"):
        notes.append(f"{len(reps)} representatives, recorded {e.get('checked')}")
        return Verdict.INCONCLUSIVE
    for eid in reps:
        image = group.word_id(index[permutation[s]] for s in group.element(eid).word)
        if image != group.inverse_id(eid):
            notes.append(f"automorphism does not invert {group.element(eid)}")
            return Verdict.INCONCLUSIVE
    return Verdict.COMMUTATIVE if e.get("bound") is None else Verdict.COMMUTATIVE_UP_TO_BOUND


def _lift(cert: Certificate, notes: list[str]) -> Verdict:
    e = cert.evidence
    check_dominance(parse_diagram(e["source"]), parse_diagram(e["target"]))
    inner = recheck(Certificate.from_dict(e["embedded"]))
    notes.extend(f"embedded: {note}" for note in inner.notes)
    return inner.verdict


CHECKS = {
    Method.COR26: _cor26,
    Method.PROP27: _heap,
    Method.STAR: _heap,
    Method.DIRECT: _direct,
    Method.CLAIM1: _claim1,
    Method.AUTOMORPHISM: _automorphism,
    Method.LIFT: _lift,
}


def recheck(cert: Certificate) -> RecheckResult:
    notes: list[str] = []
    try:
        verdict = CHECKS[cert.method](cert, notes)
    except (HeckeError, KeyError) as exc:
        message = exc.message if isinstance(exc, HeckeError) else f"missing evidence {exc}"
        logger.warning(f"Re-check of {cert.case} failed: {message}")
        notes.append(message)
        verdict = Verdict.INCONCLUSIVE
    result = RecheckResult(cert.case, cert.method, cert.verdict, verdict, notes)
    logger.info(f"Re-check of {cert.case}: {verdict.value}, reproduced: {result.reproduced}")
    return result
