import logging
from collections.abc import Iterable
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from core.config import application_config
from coxeter.diagram import CoxeterDiagram, Node
from coxeter.group import GroupElement
from hecke.algebra import ParabolicHeckeAlgebra
from hecke.polynomials import evaluate
from commute.certificates import Certificate, Method, Verdict
from commute.verifiers import certificate

logger = logging.getLogger(__name__)

SPECIALIZATION = 2


def commutator_mismatch(
    algebra: ParabolicHeckeAlgebra, u: GroupElement, v: GroupElement
) -> dict | None:
    """First w with c_{u,v;w} != c_{v,u;w}, with both constants and their values at q = 2."""
    forward = algebra.parabolic_structure_constants(u, v)
    backward = algebra.parabolic_structure_constants(v, u)
    if forward == backward:
        return None
    zero = algebra.params.zero
    for w in sorted(set(forward) | set(backward), key=lambda g: g.sort_key):
        left, right = forward.get(w, zero), backward.get(w, zero)
        if left != right:
            left_value = evaluate(left, SPECIALIZATION)
            right_value = evaluate(right, SPECIALIZATION)
            values = [evaluate(p, SPECIALIZATION) for p in (*forward.values(), *backward.values())]
            return {
                "u": str(u),
                "v": str(v),
                "w": str(w),
                "c_uv": algebra.format(left),
                "c_vu": algebra.format(right),
                "tau": SPECIALIZATION,
                "psi_c_uv": str(left_value),
                "psi_c_vu": str(right_value),
                "separated": left_value != right_value,
                "psi_nonnegative": all(value >= Fraction(0) for value in values),
            }
    return None


def direct_commutativity_scan(
    d: CoxeterDiagram,
    subset: Iterable[Node],
    bound: int | None = None,
    threads: int | None = None,
    algebra: ParabolicHeckeAlgebra | None = None,
    case: str | None = None,
) -> Certificate:
    """Compare T_u^I T_v^I with T_v^I T_u^I for all representatives up to ``bound``.

    A finite group with no bound is scanned completely; otherwise the verdict
    only covers representatives of length at most the bound.
    """
    chosen = frozenset(subset)
    algebra = algebra or ParabolicHeckeAlgebra.for_diagram(d, chosen)
    complete = bound is None and algebra.group.is_finite()
    if bound is None and not complete:
        bound = application_config.SCAN_MAX_LENGTH
    representatives = algebra.representatives(None if complete else bound)
    pairs = [
        (u, v)
        for position, u in enumerate(representatives)
        for v in representatives[position + 1 :]
    ]
    logger.info(
        f"Scanning {len(pairs)} pairs of {len(representatives)} representatives in {d}"
        + ("" if complete else f" up to length {bound}")
    )

    threads = threads or application_config.THREADS
    witness = None
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for found in pool.map(lambda pair: commutator_mismatch(algebra, *pair), pairs):
                if found is not None:
                    witness = found
                    break
    else:
        for u, v in pairs:
            witness = commutator_mismatch(algebra, u, v)
            if witness is not None:
                break

    evidence: dict = {
        "bound": None if complete else bound,
        "representatives": [str(r) for r in representatives],
        "pairs": len(pairs),
        "witness": witness,
    }
    if witness is not None:
        verdict = Verdict.NONCOMMUTATIVE
    elif complete:
        verdict = Verdict.COMMUTATIVE
    else:
        verdict = Verdict.COMMUTATIVE_UP_TO_BOUND
    logger.info(f"Direct scan of {d}: {verdict.value}")
    return certificate(d, chosen, Method.DIRECT, verdict, evidence, case)
