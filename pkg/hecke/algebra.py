"""Generic Hecke algebra arithmetic and the parabolic basis T_w^I.

Elements are sparse maps from interned group element ids to parameter
polynomials. Multiplication peels generators with the quadratic relation
``T_w T_s = q_s T_ws + (q_s - 1) T_w`` when ``ws < w``.
"""

import logging
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from sympy.polys.rings import PolyElement

from core.exceptions import ContextMismatchError, InvariantViolation, MalformedWitnessError
from coxeter.diagram import CoxeterDiagram, Node
from coxeter.group import IDENTITY, CoxeterGroup, GroupElement
from hecke.polynomials import (
    ParamRing,
    evaluate,
    exact_quotient,
    format_polynomial,
    has_nonnegative_coefficients,
    poincare_from_group,
    shifted,
)

logger = logging.getLogger(__name__)

Terms = dict[int, PolyElement]


def _add_into(terms: Terms, eid: int, value: PolyElement) -> None:
    if not value:
        return
    total = terms.get(eid)
    total = value if total is None else total + value
    if total:
        terms[eid] = total
    else:
        del terms[eid]


@dataclass(frozen=True, eq=False)
class HeckeElement:
    algebra: "HeckeAlgebra"
    terms: Mapping[int, PolyElement]

    def _check(self, other: "HeckeElement") -> None:
        if other.algebra is not self.algebra:
            raise ContextMismatchError("Hecke elements belong to different algebras")

    def __add__(self, other: "HeckeElement") -> "HeckeElement":
        self._check(other)
        terms = dict(self.terms)
        for eid, value in other.terms.items():
            _add_into(terms, eid, value)
        return HeckeElement(self.algebra, terms)

    def __sub__(self, other: "HeckeElement") -> "HeckeElement":
        return self + other.scale(-1)

    def __mul__(self, other: "HeckeElement") -> "HeckeElement":
        return self.algebra.hecke_product(self, other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HeckeElement):
            return NotImplemented
        return other.algebra is self.algebra and dict(self.terms) == dict(other.terms)

    def __hash__(self) -> int:
        return hash(frozenset(self.terms))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def scale(self, factor: PolyElement | int) -> "HeckeElement":
        terms: Terms = {}
        for eid, value in self.terms.items():
            _add_into(terms, eid, value * factor)
        return HeckeElement(self.algebra, terms)

    def coefficient(self, w: GroupElement | int) -> PolyElement:
        eid = w if isinstance(w, int) else self.algebra.group.id_of(w)
        return self.terms.get(eid, self.algebra.params.zero)

    def support(self) -> dict[GroupElement, PolyElement]:
        group = self.algebra.group
        return {
            group.element(eid): value
            for eid, value in sorted(self.terms.items(), key=lambda kv: group.element(kv[0]).sort_key)
        }

    def specialize(self, tau: Mapping[int, Fraction | int] | Fraction | int) -> dict[GroupElement, Fraction]:
        """Evaluate every coefficient at the parameters ``tau``, dropping zeros."""
        values = {w: evaluate(p, tau) for w, p in self.support().items()}
        return {w: v for w, v in values.items() if v}

    def shifted(self) -> dict[GroupElement, PolyElement]:
        return {w: shifted(p) for w, p in self.support().items()}

    def as_text(self) -> str:
        names = self.algebra.params.names
        if not self.terms:
            return "0"
        return " + ".join(
            f"({format_polynomial(p, names)})*T[{w}]" for w, p in self.support().items()
        )

    def __str__(self) -> str:
        return self.as_text()


class HeckeAlgebra:
    """The generic multi-parameter Hecke algebra of a Coxeter diagram."""

    def __init__(self, diagram: CoxeterDiagram, group: CoxeterGroup | None = None) -> None:
        self.diagram = diagram
        self.group = group or CoxeterGroup(diagram)
        self.params = ParamRing(diagram)
        self._q = [self.params.q(s) for s in self.group.nodes]
        self._monomials: dict[int, PolyElement] = {}
        self._poincare: dict = {}

    def __repr__(self) -> str:
        return f"HeckeAlgebra({self.diagram})"

    def q(self, s: Node) -> PolyElement:
        return self.params.q(s)

    def q_of(self, eid: int) -> PolyElement:
        cached = self._monomials.get(eid)
        if cached is None:
            cached = self.params.monomial(self.group.nodes[s] for s in self.group.shortlex_indices(eid))
            self._monomials[eid] = cached
        return cached

    def poincare(self, subset: Iterable[Node]) -> PolyElement:
        return poincare_from_group(self.group, self.params, subset, self._poincare)

    def element(self, terms: Mapping[int, PolyElement]) -> HeckeElement:
        return HeckeElement(self, {eid: p for eid, p in terms.items() if p})

    def zero(self) -> HeckeElement:
        return HeckeElement(self, {})

    def basis(self, w: GroupElement | int) -> HeckeElement:
        eid = w if isinstance(w, int) else self.group.id_of(w)
        return HeckeElement(self, {eid: self.params.one})

    def T(self, word: str | Iterable[Node]) -> HeckeElement:
        return self.basis(self.group(word))  # type: ignore[arg-type]

    def sum_of(self, ids: Iterable[int], coefficient: PolyElement | None = None) -> HeckeElement:
        value = self.params.one if coefficient is None else coefficient
        return HeckeElement(self, {eid: value for eid in ids} if value else {})

    def parabolic_idempotent(self, subset: Iterable[Node]) -> HeckeElement:
        """1_I: the sum of T_z over z in W_I."""
        chosen = tuple(subset)
        self.group.require_spherical(chosen)
        return self.sum_of(self.group.enumerate_ids(self.group.subset_indices(chosen)))

    # -------------------------------------------------------- multiplication

    def right_generator(self, terms: Mapping[int, PolyElement], s: int) -> Terms:
        group = self.group
        q = self._q[s]
        out: Terms = {}
        for w, value in terms.items():
            ws = group.right_multiply(w, s)
            if group.is_right_descent(w, s):
                _add_into(out, ws, q * value)
                _add_into(out, w, (q - 1) * value)
            else:
                _add_into(out, ws, value)
        return out

    def left_generator(self, s: int, terms: Mapping[int, PolyElement]) -> Terms:
        group = self.group
        q = self._q[s]
        out: Terms = {}
        for w, value in terms.items():
            sw = group.left_multiply(s, w)
            if group.is_left_descent(w, s):
                _add_into(out, sw, q * value)
                _add_into(out, w, (q - 1) * value)
            else:
                _add_into(out, sw, value)
        return out

    def left_word(self, eid: int, terms: Mapping[int, PolyElement]) -> Terms:
        """T_w times ``terms``, peeling the reduced word of w from its right end."""
        result: Terms = dict(terms)
        for s in reversed(self.group.shortlex_indices(eid)):
            result = self.left_generator(s, result)
        return result

    def hecke_product(self, x: HeckeElement, y: HeckeElement) -> HeckeElement:
        if x.algebra is not self or y.algebra is not self:
            raise ContextMismatchError("Hecke elements belong to a different algebra")
        total: Terms = {}
        for v, coefficient in y.terms.items():
            partial: Terms = dict(x.terms)
            for s in self.group.shortlex_indices(v):
                partial = self.right_generator(partial, s)
            for w, value in partial.items():
                _add_into(total, w, value * coefficient)
        return HeckeElement(self, total)

    def structure_constant(self, u: GroupElement, v: GroupElement, w: GroupElement) -> PolyElement:
        return self.hecke_product(self.basis(u), self.basis(v)).coefficient(w)


class ParabolicHeckeAlgebra:
    """The subalgebra 1_I H 1_I with basis T_w^I indexed by I-reduced w."""

    def __init__(self, algebra: HeckeAlgebra, subset: Iterable[Node]) -> None:
        self.algebra = algebra
        self.group = algebra.group
        self.diagram = algebra.diagram
        self.subset = frozenset(subset)
        self.decomposition = self.group.require_spherical(self.subset)
        self.indices = self.group.subset_indices(self.subset)
        self.parabolic_ids = self.group.enumerate_ids(self.indices)
        self.poincare_I = algebra.poincare(self.subset)

    @classmethod
    def for_diagram(cls, diagram: CoxeterDiagram, subset: Iterable[Node]) -> "ParabolicHeckeAlgebra":
        return cls(HeckeAlgebra(diagram), subset)

    def __repr__(self) -> str:
        return f"ParabolicHeckeAlgebra({self.diagram}, I={self.diagram.format_subset(self.subset)})"

    @property
    def params(self) -> ParamRing:
        return self.algebra.params

    @cached_property
    def idempotent(self) -> HeckeElement:
        return self.algebra.sum_of(self.parabolic_ids)

    def format(self, p: PolyElement) -> str:
        return format_polynomial(p, self.params.names)

    def require_reduced(self, w: GroupElement | int) -> int:
        eid = w if isinstance(w, int) else self.group.id_of(w)
        if not self.group.is_reduced_for(eid, self.indices):
            raise MalformedWitnessError(
                f"{self.group.element(eid)} is not I-reduced for I={self.diagram.format_subset(self.subset)}",
                element=str(self.group.element(eid)),
            )
        return eid

    def stabilizer_ids(self, eid: int) -> frozenset[int]:
        return self.group.stabilizer(eid, self.indices)

    def stabilizer_poincare(self, eid: int) -> PolyElement:
        nodes = self.group.nodes
        return self.algebra.poincare(nodes[s] for s in self.stabilizer_ids(eid))

    def quotient_poincare(self, eid: int) -> PolyElement:
        """W_I(q) / W_{I ∩ wIw^-1}(q), always exact."""
        return exact_quotient(self.poincare_I, self.stabilizer_poincare(eid))

    def left_factor_ids(self, eid: int) -> list[int]:
        """Minimal representatives of W_I / W_{I ∩ wIw^-1}."""
        return self.group.enumerate_ids(self.indices, avoid_right=self.stabilizer_ids(eid))

    def double_coset_ids(self, eid: int) -> list[int]:
        """W_I w W_I, each element written once as a·w·b."""
        group = self.group
        found = []
        for a in self.left_factor_ids(eid):
            aw = group.multiply_ids(a, eid)
            found.extend(group.multiply_ids(aw, b) for b in self.parabolic_ids)
        return found

    def minimal_representative(self, eid: int) -> int:
        return self.group.strip_to_minimal(eid, self.indices)[0]

    def representatives(self, bound: int | None = None) -> list[GroupElement]:
        return self.group.sorted_elements(self.group.double_coset_ids(self.indices, bound))

    # ------------------------------------------------------------ the basis

    def parabolic_basis_element(self, w: GroupElement | int) -> HeckeElement:
        """T_w^I = W_I(q) / W_{I∩wIw^-1}(q) · 1_I T_w 1_I."""
        eid = self.require_reduced(w)
        sandwich = self.algebra.hecke_product(
            self.algebra.hecke_product(self.idempotent, self.algebra.basis(eid)), self.idempotent
        )
        divisor = self.stabilizer_poincare(eid)
        terms = {x: exact_quotient(value, divisor) * self.poincare_I for x, value in sandwich.terms.items()}
        return self.algebra.element(terms)

    def basis_from_coset(self, w: GroupElement | int) -> HeckeElement:
        """W_I(q) times the sum of T_z over the double coset of w."""
        eid = self.require_reduced(w)
        return self.algebra.sum_of(self.double_coset_ids(eid), self.poincare_I)

    def parabolic_structure_constants(
        self, u: GroupElement | int, v: GroupElement | int
    ) -> dict[GroupElement, PolyElement]:
        """Expansion of T_u^I T_v^I in the basis T_w^I.

        Uses T_u^I T_v^I = (W_I/W_{K_u})(W_I/W_{K_v}) W_I · 1_I T_u (sum_z T_zv) 1_I
        and 1_I T_x 1_I = (q_x/q_w) 1_I T_w 1_I for x in W_I w W_I.
        """
        group = self.group
        uid = self.require_reduced(u)
        vid = self.require_reduced(v)
        right = {group.multiply_ids(z, vid): self.params.one for z in self.parabolic_ids}
        product = self.algebra.left_word(uid, right)
        collected: Terms = {}
        for x, value in product.items():
            w = self.minimal_representative(x)
            ratio = exact_quotient(self.algebra.q_of(x), self.algebra.q_of(w))
            _add_into(collected, w, value * ratio)
        scale = self.quotient_poincare(uid) * self.quotient_poincare(vid)
        constants = {
            w: scale * self.stabilizer_poincare(w) * value for w, value in collected.items()
        }
        return self._as_elements(constants)

    def _as_elements(self, constants: Mapping[int, PolyElement]) -> dict[GroupElement, PolyElement]:
        group = self.group
        ordered = sorted(constants.items(), key=lambda kv: group.element(kv[0]).sort_key)
        return {group.element(w): value for w, value in ordered if value}

    def structure_constants_via_cosets(
        self, u: GroupElement | int, v: GroupElement | int
    ) -> dict[GroupElement, PolyElement]:
        """Same constants read off W_I(q)^2 · sum_a T_a T_u B for every z of each coset.

        B is the sum of T_y over W_I v W_I and a runs over W_I / W_{I∩uIu^-1}.
        Raises InvariantViolation when the value depends on the chosen z.
        """
        group = self.group
        uid = self.require_reduced(u)
        vid = self.require_reduced(v)
        coset_sum = {y: self.params.one for y in self.double_coset_ids(vid)}
        base = self.algebra.left_word(uid, coset_sum)
        layers: dict[int, Terms] = {IDENTITY: base}
        total: Terms = dict(base)
        for a in self.left_factor_ids(uid):
            if a == IDENTITY:
                continue
            s = next(t for t in self.indices if group.is_left_descent(a, t))
            layers[a] = self.algebra.left_generator(s, layers[group.left_multiply(s, a)])
            for x, value in layers[a].items():
                _add_into(total, x, value)
        square = self.poincare_I * self.poincare_I
        constants: dict[int, PolyElement] = {}
        for x, value in total.items():
            w = self.minimal_representative(x)
            candidate = square * value
            if w in constants and constants[w] != candidate:
                raise InvariantViolation(
                    f"Structure constant at {group.element(w)} depends on the coset element {group.element(x)}",
                    expected=self.format(constants[w]),
                    found=self.format(candidate),
                )
            constants[w] = candidate
        for w in list(constants):
            missing = set(self.double_coset_ids(w)) - total.keys()
            if missing:
                raise InvariantViolation(
                    f"Product misses part of the double coset of {group.element(w)}",
                    missing=len(missing),
                )
        return self._as_elements(constants)

    def specialized_constants(
        self, u: GroupElement | int, v: GroupElement | int, tau: Fraction | int | Mapping[int, Fraction | int]
    ) -> dict[GroupElement, Fraction]:
        return {
            w: evaluate(p, tau) for w, p in self.parabolic_structure_constants(u, v).items()
        }


def specialize(
    value: PolyElement | HeckeElement,
    tau: Mapping[int, Fraction | int] | Fraction | int,
    shifted_form: bool = False,
) -> Fraction | PolyElement | dict:
    """Evaluate at q_c = tau_c, or with ``shifted_form`` rewrite in the variables q_c - 1."""
    if isinstance(value, HeckeElement):
        return value.shifted() if shifted_form else value.specialize(tau)
    if shifted_form:
        return shifted(value)
    return evaluate(value, tau)


def is_shifted_nonnegative(p: PolyElement) -> bool:
    return has_nonnegative_coefficients(shifted(p))


def inversion_symmetry_check(
    algebra: ParabolicHeckeAlgebra, u: GroupElement, v: GroupElement
) -> list[dict[str, str]]:
    """Mismatches between c_{u,v;w} and c_{v^-1,u^-1;w^-1}; empty when the identity holds."""
    group = algebra.group
    forward = algebra.parabolic_structure_constants(u, v)
    backward = algebra.parabolic_structure_constants(group.inverse(v), group.inverse(u))
    mismatches = []
    for w in sorted(set(forward) | {group.inverse(x) for x in backward}, key=lambda g: g.sort_key):
        left = forward.get(w, algebra.params.zero)
        right = backward.get(group.inverse(w), algebra.params.zero)
        if left != right:
            mismatches.append(
                {"w": str(w), "forward": algebra.format(left), "inverted": algebra.format(right)}
            )
    return mismatches
