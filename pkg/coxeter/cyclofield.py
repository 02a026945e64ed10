"""Exact arithmetic in the real cyclotomic field Q(2cos(pi/L)).

Elements are coefficient vectors in the power basis of ``lambda_L`` reduced
modulo its minimal polynomial. Signs are decided by rational interval
evaluation on an isolating interval of ``lambda_L``.
"""

import logging
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from sympy import QQ, ZZ, Poly, Symbol, cyclotomic_poly

from core.exceptions import FieldArithmeticError, InvariantViolation

logger = logging.getLogger(__name__)

Rational = int | Fraction

_x = Symbol("x")
_z = Symbol("z")

# Width the isolating interval is refined to when a context is created.
_INITIAL_WIDTH = Fraction(1, 2**64)


def _to_fraction(value: object) -> Fraction:
    # sympy Rational -> Fraction
    return Fraction(int(value.p), int(value.q))  # type: ignore[attr-defined]


def _normalise(value: Rational) -> Rational:
    if isinstance(value, Fraction) and value.denominator == 1:
        return int(value.numerator)
    return value


def _evaluate(coeffs: Sequence[Rational], point: Rational) -> Rational:
    """Horner evaluation, coefficients listed from the constant term up."""
    acc: Rational = 0
    for c in reversed(coeffs):
        acc = acc * point + c
    return acc


def _sign(value: Rational) -> int:
    return (value > 0) - (value < 0)


def _interval_product(
    a: tuple[Rational, Rational], b: tuple[Rational, Rational]
) -> tuple[Rational, Rational]:
    products = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return min(products), max(products)


def chebyshev_fold(k: int) -> Poly:
    """D_k with 2cos(k t) = D_k(2cos t)."""
    previous, current = Poly(2, _x, domain=ZZ), Poly(_x, _x, domain=ZZ)
    if k == 0:
        return previous
    for _ in range(k - 1):
        previous, current = current, current * Poly(_x, _x, domain=ZZ) - previous
    return current


def folded_cyclotomic(level: int) -> Poly:
    """Minimal polynomial of 2cos(pi/L) from Phi_{2L} through x = z + 1/z."""
    if level == 1:
        return Poly(_x + 2, _x, domain=ZZ)
    phi = Poly(cyclotomic_poly(2 * level, _z), _z)
    coeffs = list(reversed(phi.all_coeffs()))
    half = (len(coeffs) - 1) // 2
    folded = Poly(int(coeffs[half]), _x, domain=ZZ)
    for j in range(1, half + 1):
        folded += int(coeffs[half + j]) * chebyshev_fold(j)
    return folded


@dataclass(frozen=True)
class FieldContext:
    level: int
    min_poly: tuple[int, ...]
    isolating_interval: tuple[Fraction, Fraction]
    _reduction: tuple[tuple[Rational, ...], ...] = field(
        default=(), compare=False, repr=False
    )

    @property
    def degree(self) -> int:
        return len(self.min_poly) - 1

    @property
    def is_rational(self) -> bool:
        return self.degree == 1

    def number(self, coeffs: Iterable[Rational]) -> "CycloNumber":
        values = [_normalise(c) for c in coeffs]
        if len(values) > self.degree:
            return CycloNumber(self, self._reduce(values))
        values += [0] * (self.degree - len(values))
        return CycloNumber(self, tuple(values))

    def integer(self, value: Rational) -> "CycloNumber":
        return self.number([value])

    @property
    def zero(self) -> "CycloNumber":
        return self.integer(0)

    @property
    def one(self) -> "CycloNumber":
        return self.integer(1)

    @property
    def generator(self) -> "CycloNumber":
        if self.is_rational:
            return self.integer(-self.min_poly[0])
        return self.number([0, 1])

    def _reduce(self, values: list[Rational]) -> tuple[Rational, ...]:
        d = self.degree
        head = list(values[:d]) + [0] * max(0, d - len(values))
        for k, c in enumerate(values[d:], start=d):
            if c:
                row = self._reduction[k - d]
                for j in range(d):
                    if row[j]:
                        head[j] += c * row[j]
        return tuple(_normalise(c) for c in head)

    def value_sign_at(self, coeffs: Sequence[Rational], point: Rational) -> int:
        return _sign(_evaluate(coeffs, point))


def _reduction_table(min_poly: Sequence[int]) -> tuple[tuple[Rational, ...], ...]:
    d = len(min_poly) - 1
    # x^d = -(m_0 + ... + m_{d-1} x^{d-1})
    current: list[Rational] = [-c for c in min_poly[:d]]
    rows = [tuple(current)]
    for _ in range(max(0, d - 2)):
        top = current[-1]
        shifted: list[Rational] = [0] + current[:-1]
        current = [shifted[j] + top * (-min_poly[j]) for j in range(d)]
        rows.append(tuple(current))
    return tuple(rows)


def _refine(
    min_poly: Sequence[int], interval: tuple[Fraction, Fraction], width: Fraction
) -> tuple[Fraction, Fraction]:
    lo, hi = interval
    if lo == hi:
        return interval
    sign_lo = _sign(_evaluate(min_poly, lo))
    while hi - lo > width:
        mid = (lo + hi) / 2
        sign_mid = _sign(_evaluate(min_poly, mid))
        if sign_mid == 0:
            return mid, mid
        if sign_mid == sign_lo:
            lo = mid
        else:
            hi = mid
    return lo, hi


@lru_cache(maxsize=64)
def field_for_level(level: int) -> FieldContext:
    poly = folded_cyclotomic(level)
    if not poly.is_sqf or not poly.is_irreducible:
        raise InvariantViolation(f"Folded cyclotomic polynomial for L={level} is reducible")
    min_poly = tuple(int(c) for c in reversed(poly.all_coeffs()))
    if level >= 2 and len(min_poly) - 1 != _totient(2 * level) // 2:
        raise InvariantViolation(f"Unexpected degree for L={level}")

    # lambda_L is the largest real root of the folded polynomial.
    intervals = Poly(poly.as_expr(), _x, domain=QQ).intervals()
    lo, hi = max(intervals, key=lambda item: item[0][1])[0]
    interval = _refine(min_poly, (_to_fraction(lo), _to_fraction(hi)), _INITIAL_WIDTH)
    expected = 2 * math.cos(math.pi / level)
    if not (float(interval[0]) - 1e-9 <= expected <= float(interval[1]) + 1e-9):
        raise InvariantViolation(f"Isolating interval misses 2cos(pi/{level})")

    logger.debug(f"Field context L={level} with minimal polynomial {poly.as_expr()}")
    return FieldContext(level, min_poly, interval, _reduction_table(min_poly))


def _totient(n: int) -> int:
    return sum(1 for k in range(1, n + 1) if math.gcd(k, n) == 1)


def make_field(bonds: Iterable[int]) -> FieldContext:
    values = set(bonds)
    for m in values:
        if m < 3:
            raise FieldArithmeticError(f"Bond {m} is below 3", bond=m)
    return field_for_level(math.lcm(*values) if values else 1)


class CycloNumber:
    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: FieldContext, coeffs: tuple[Rational, ...]) -> None:
        self.ctx = ctx
        self.coeffs = coeffs

    def _check(self, other: "CycloNumber") -> None:
        if other.ctx.level != self.ctx.level:
            raise FieldArithmeticError("Field contexts differ")

    def _coerce(self, other: "CycloNumber | Rational") -> "CycloNumber":
        if isinstance(other, CycloNumber):
            self._check(other)
            return other
        return self.ctx.integer(other)

    def __add__(self, other: "CycloNumber | Rational") -> "CycloNumber":
        o = self._coerce(other)
        return CycloNumber(
            self.ctx, tuple(_normalise(a + b) for a, b in zip(self.coeffs, o.coeffs))
        )

    __radd__ = __add__

    def __neg__(self) -> "CycloNumber":
        return CycloNumber(self.ctx, tuple(-a for a in self.coeffs))

    def __sub__(self, other: "CycloNumber | Rational") -> "CycloNumber":
        return self + (-self._coerce(other))

    def __rsub__(self, other: Rational) -> "CycloNumber":
        return self.ctx.integer(other) - self

    def __mul__(self, other: "CycloNumber | Rational") -> "CycloNumber":
        if not isinstance(other, CycloNumber):
            if other == 0:
                return self.ctx.zero
            return CycloNumber(self.ctx, tuple(_normalise(a * other) for a in self.coeffs))
        self._check(other)
        d = self.ctx.degree
        product: list[Rational] = [0] * (2 * d - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    product[i + j] += a * b
        return CycloNumber(self.ctx, self.ctx._reduce(product))

    __rmul__ = __mul__

    def invert(self) -> "CycloNumber":
        if not self:
            raise FieldArithmeticError("Cannot invert zero")
        if self.ctx.is_rational:
            return self.ctx.integer(Fraction(1) / self.coeffs[0])
        element = Poly(list(reversed(self.coeffs)), _x, domain=QQ)
        modulus = Poly(list(reversed(self.ctx.min_poly)), _x, domain=QQ)
        inverse = element.invert(modulus)
        return self.ctx.number(_to_fraction(c) for c in reversed(inverse.all_coeffs()))

    def __truediv__(self, other: "CycloNumber | Rational") -> "CycloNumber":
        return self * self._coerce(other).invert()

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, CycloNumber):
            return self.ctx.level == other.ctx.level and self.coeffs == other.coeffs
        if isinstance(other, int | Fraction):
            return self.coeffs == self.ctx.integer(other).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        if all(c == 0 for c in self.coeffs[1:]):
            return hash(self.coeffs[0])
        return hash((self.ctx.level, self.coeffs))

    def signum(self) -> int:
        """Exact sign, refining a private copy of the isolating interval."""
        coeffs = self.coeffs
        if not any(coeffs):
            return 0
        if all(c == 0 for c in coeffs[1:]):
            return _sign(coeffs[0])
        if self.ctx.is_rational:
            return _sign(_evaluate(coeffs, self.ctx.generator.coeffs[0]))

        lo, hi = self.ctx.isolating_interval
        min_poly = self.ctx.min_poly
        while True:
            if lo == hi:
                return _sign(_evaluate(coeffs, lo))
            acc: tuple[Rational, Rational] = (coeffs[-1], coeffs[-1])
            for c in reversed(coeffs[:-1]):
                low, high = _interval_product(acc, (lo, hi))
                acc = (low + c, high + c)
            if acc[0] > 0:
                return 1
            if acc[1] < 0:
                return -1
            lo, hi = _refine(min_poly, (lo, hi), (hi - lo) / 2)

    def __float__(self) -> float:
        lam = 2 * math.cos(math.pi / self.ctx.level)
        return float(sum(float(c) * lam**i for i, c in enumerate(self.coeffs)))

    def __repr__(self) -> str:
        terms = [f"{c}*l^{i}" for i, c in enumerate(self.coeffs) if c]
        return f"CycloNumber(L={self.ctx.level}: {' + '.join(terms) or '0'})"


def embed_lambda(ctx: FieldContext, m: int | float) -> CycloNumber:
    """2cos(pi/m) inside ``ctx``; 2 for an infinite bond and 0 for m = 2."""
    if m == math.inf:
        return ctx.integer(2)
    m = int(m)
    if m == 2:
        return ctx.zero
    if m < 2 or ctx.level % m:
        raise FieldArithmeticError(f"Bond {m} does not divide level {ctx.level}", bond=m)
    lam = ctx.generator
    previous, current = ctx.integer(2), lam
    for _ in range(ctx.level // m - 1):
        previous, current = current, current * lam - previous
    return current


def field_arithmetic(
    ctx: FieldContext, op: str, a: CycloNumber, b: CycloNumber | None = None
) -> CycloNumber:
    if op == "invert":
        return a.invert()
    if b is None:
        raise FieldArithmeticError(f"Operation {op} needs two operands")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise FieldArithmeticError(f"Unknown field operation {op!r}")


def signum(ctx: FieldContext, a: CycloNumber) -> int:
    return a.signum()
