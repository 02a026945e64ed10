"""Parameter polynomials over the generator conjugacy classes.

A ParamPolynomial is a sympy ``PolyElement`` of ``ZZ[q, q', ...]`` with one
variable per conjugacy class of generators, named in node order.
"""

from collections.abc import Iterable, Mapping
from fractions import Fraction
from functools import cached_property

from sympy import Symbol
from sympy.polys.domains import ZZ
from sympy.polys.orderings import lex
from sympy.polys.polyerrors import ExactQuotientFailed
from sympy.polys.rings import PolyElement, PolyRing, ring

from core.exceptions import InvariantViolation, NonSphericalError
from coxeter.diagram import CoxeterDiagram, Node, generator_conjugacy_classes, is_spherical
from coxeter.group import CoxeterGroup

ParamPolynomial = PolyElement


def class_variable_names(count: int) -> list[str]:
    return ["q" + "'" * i for i in range(count)]


class ParamRing:
    """Polynomial ring with one parameter per conjugacy class of generators."""

    def __init__(self, diagram: CoxeterDiagram) -> None:
        self.diagram = diagram
        index = diagram.index
        self.classes = sorted(
            generator_conjugacy_classes(diagram), key=lambda c: min(index[s] for s in c)
        )
        self.names = class_variable_names(len(self.classes))
        self.ring: PolyRing
        self.ring, *gens = ring([Symbol(name) for name in self.names], ZZ, lex)
        self.gens: tuple[PolyElement, ...] = tuple(gens)
        self.class_of: dict[Node, int] = {
            s: position for position, members in enumerate(self.classes) for s in members
        }

    @property
    def zero(self) -> PolyElement:
        return self.ring.zero

    @property
    def one(self) -> PolyElement:
        return self.ring.one

    def q(self, s: Node) -> PolyElement:
        return self.gens[self.class_of[s]]

    def monomial(self, word: Iterable[Node]) -> PolyElement:
        exponents = [0] * len(self.gens)
        for s in word:
            exponents[self.class_of[s]] += 1
        return self.ring({tuple(exponents): 1})

    def class_name(self, s: Node) -> str:
        return self.names[self.class_of[s]]

    @cached_property
    def class_labels(self) -> dict[str, list[str]]:
        return {
            name: self.diagram.format_subset(members)
            for name, members in zip(self.names, self.classes)
        }


def _monomial_text(names: list[str], exponents: tuple[int, ...]) -> str:
    factors = []
    for name, e in zip(names, exponents):
        if e == 1:
            factors.append(name)
        elif e > 1:
            factors.append(f"{name}^{e}")
    return "*".join(factors)


def _term_key(term: tuple[tuple[int, ...], int]) -> tuple[int, tuple[int, ...]]:
    exponents = term[0]
    return sum(exponents), tuple(-e for e in exponents)


def format_polynomial(p: PolyElement, names: list[str] | None = None) -> str:
    """Print as ``1 + 2*q + 2*q^2 + q^3``: ascending degree, earlier classes first."""
    names = names or [str(g) for g in p.ring.symbols]
    if not p:
        return "0"
    parts: list[str] = []
    for exponents, coeff in sorted(p.terms(), key=_term_key):
        monomial = _monomial_text(names, exponents)
        magnitude = abs(int(coeff))
        if not monomial:
            body = str(magnitude)
        elif magnitude == 1:
            body = monomial
        else:
            body = f"{magnitude}*{monomial}"
        if not parts:
            parts.append(body if coeff > 0 else f"-{body}")
        else:
            parts.append(f" + {body}" if coeff > 0 else f" - {body}")
    return "".join(parts)


def exact_quotient(p: PolyElement, divisor: PolyElement) -> PolyElement:
    try:
        return p.exquo(divisor)
    except ExactQuotientFailed:
        raise InvariantViolation(
            f"{format_polynomial(divisor)} does not divide {format_polynomial(p)}"
        ) from None


def evaluate(p: PolyElement, tau: Mapping[int, Fraction | int] | Fraction | int) -> Fraction:
    """Exact value at q_c = tau[c]; a scalar tau is used for every class."""
    total = Fraction(0)
    for exponents, coeff in p.terms():
        value = Fraction(int(coeff))
        for position, e in enumerate(exponents):
            if e:
                point = tau if isinstance(tau, int | Fraction) else tau[position]
                value *= Fraction(point) ** e
        total += value
    return total


def shifted(p: PolyElement) -> PolyElement:
    """Rewrite ``p`` in the variables ``q_c - 1`` (coefficients read off the result)."""
    result = p
    for g in p.ring.gens:
        result = result.compose(g, g + 1)
    return result


def has_nonnegative_coefficients(p: PolyElement) -> bool:
    return all(coeff >= 0 for coeff in p.coeffs()) if p else True


def poincare_from_group(
    group: CoxeterGroup, params: ParamRing, subset: Iterable[Node], cache: dict | None = None
) -> PolyElement:
    """W_J(q), built as W_{J-j}(q) times the sum over minimal coset representatives."""
    d = group.diagram
    chosen = frozenset(subset)
    if not is_spherical(d, chosen):
        raise NonSphericalError(
            f"Subset {d.format_subset(chosen)} of {d} is not spherical",
            subset=d.format_subset(chosen),
        )
    cache = {} if cache is None else cache
    return _poincare(group, params, chosen, cache)


def _poincare(
    group: CoxeterGroup, params: ParamRing, chosen: frozenset[Node], cache: dict
) -> PolyElement:
    if chosen in cache:
        return cache[chosen]
    d = group.diagram
    components = d.components(chosen)
    if not chosen:
        result = params.one
    elif len(components) > 1:
        result = params.one
        for component in components:
            result = result * _poincare(group, params, frozenset(component), cache)
    else:
        last = max(chosen, key=d.index.__getitem__)
        rest = chosen - {last}
        generators = group.subset_indices(chosen)
        quotient = params.zero
        for eid in group.enumerate_ids(generators, avoid_right=group.subset_indices(rest)):
            quotient += params.monomial(group.element(eid).word)
        result = _poincare(group, params, rest, cache) * quotient
    cache[chosen] = result
    return result


def poincare_polynomial(d: CoxeterDiagram, subset: Iterable[Node] | None = None) -> PolyElement:
    group = CoxeterGroup(d)
    return poincare_from_group(group, ParamRing(d), d.nodes if subset is None else subset)
