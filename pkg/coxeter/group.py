"""Coxeter group elements via the geometric representation.

Every element met during a run is interned once, keyed by its exact matrix
``M(w)`` (columns are the images of the simple roots), together with
``M(w^-1)``. Right descents are read from ``M(w)``, left descents from
``M(w^-1)``. Public values are :class:`GroupElement` objects carrying the
ShortLex normal form.
"""

import logging
import threading
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from core.exceptions import (
    ContextMismatchError,
    GuardExceededError,
    NonSphericalError,
    UnknownNodeError,
)
from coxeter.cyclofield import embed_lambda, make_field
from coxeter.diagram import (
    INF,
    CoxeterDiagram,
    FiniteTypeDecomposition,
    Node,
    classify_spherical,
    parabolic_order,
)

logger = logging.getLogger(__name__)

Scalar = Any
Column = tuple[Scalar, ...]
Matrix = tuple[Column, ...]

IDENTITY = 0


@dataclass(frozen=True)
class GroupElement:
    diagram: CoxeterDiagram
    word: tuple[Node, ...]

    @property
    def length(self) -> int:
        return len(self.word)

    def __len__(self) -> int:
        return len(self.word)

    @property
    def sort_key(self) -> tuple[int, tuple[int, ...]]:
        index = self.diagram.index
        return len(self.word), tuple(index[s] for s in self.word)

    @property
    def is_identity(self) -> bool:
        return not self.word

    def __lt__(self, other: "GroupElement") -> bool:
        return self.sort_key < other.sort_key

    def __str__(self) -> str:
        return self.diagram.format_word(self.word) or "e"


@dataclass(frozen=True)
class DoubleCosetRecord:
    min_rep: GroupElement
    stabilizer_subset: frozenset[Node]
    coset_size: int
    left_quotient_size: int
    involution: bool


def _symmetrising_weights(d: CoxeterDiagram) -> dict[Node, Fraction] | None:
    """Root length weights making the representation integral, if any."""
    allowed = {3: {Fraction(1)}, INF: {Fraction(1)}, 4: {Fraction(2), Fraction(1, 2)}, 6: {Fraction(3), Fraction(1, 3)}}
    grow = {3: 1, INF: 1, 4: 2, 6: 3}
    if any(m not in allowed for _, _, m in d.bond_items):
        return None
    weights: dict[Node, Fraction] = {}
    for start in d.nodes:
        if start in weights:
            continue
        weights[start] = Fraction(1)
        stack = [start]
        while stack:
            s = stack.pop()
            for t in d.neighbours(s):
                if t not in weights:
                    weights[t] = weights[s] * grow[d.m(s, t)]
                    stack.append(t)
    for s, t, m in d.bond_items:
        if weights[t] / weights[s] not in allowed[m]:
            return None
    return weights


class RootRepresentation:
    """sigma_s(alpha_t) = alpha_t + k[s][t] alpha_s with k[s][s] = -2."""

    def __init__(self, diagram: CoxeterDiagram, integral: bool | None = None) -> None:
        self.diagram = diagram
        nodes = diagram.nodes
        n = len(nodes)
        weights = _symmetrising_weights(diagram) if integral is not False else None
        if integral and weights is None:
            raise ValueError(f"{diagram} has no integral root representation")
        self.integral = weights is not None

        if weights is not None:
            self.zero: Scalar = 0
            self.one: Scalar = 1
            self.k = [[0] * n for _ in range(n)]
            for i, s in enumerate(nodes):
                self.k[i][i] = -2
                for j, t in enumerate(nodes):
                    m = diagram.m(s, t)
                    if i == j or m == 2:
                        continue
                    if m == INF:
                        self.k[i][j] = 2
                    elif weights[t] > weights[s]:
                        # lambda_m * sqrt(d_t / d_s) with d_t / d_s in {2, 3}
                        self.k[i][j] = 2 if m == 4 else 3
                    else:
                        self.k[i][j] = 1
            self.field = None
        else:
            self.field = make_field(diagram.finite_bonds())
            self.zero = self.field.zero
            self.one = self.field.one
            self.k = [
                [
                    self.field.integer(-2)
                    if i == j
                    else embed_lambda(self.field, diagram.m(s, t))
                    for j, t in enumerate(nodes)
                ]
                for i, s in enumerate(nodes)
            ]
        self.neighbours = [
            tuple(j for j in range(n) if j != i and self.k[i][j] != 0) for i in range(n)
        ]
        logger.debug(
            f"Root representation for {diagram}: "
            f"{'integral' if self.integral else f'cyclotomic L={self.field.level}'}"  # type: ignore[union-attr]
        )

    def sign(self, value: Scalar) -> int:
        if self.integral:
            return (value > 0) - (value < 0)
        return value.signum()

    def is_negative(self, column: Column) -> bool:
        for value in column:
            if value != 0:
                return self.sign(value) < 0
        return False

    def identity(self) -> Matrix:
        n = len(self.k)
        return tuple(
            tuple(self.one if i == j else self.zero for i in range(n)) for j in range(n)
        )

    def times_reflection(self, matrix: Matrix, s: int) -> Matrix:
        """M * sigma_s, a column operation."""
        col_s = matrix[s]
        row = self.k[s]
        columns = list(matrix)
        for t in self.neighbours[s]:
            coefficient = row[t]
            columns[t] = tuple(a + coefficient * b for a, b in zip(matrix[t], col_s))
        columns[s] = tuple(-b for b in col_s)
        return tuple(columns)

    def reflection_times(self, matrix: Matrix, s: int) -> Matrix:
        """sigma_s * M, changing coordinate s of every column."""
        row = self.k[s]
        near = self.neighbours[s]
        columns = []
        for column in matrix:
            value = -column[s]
            for t in near:
                if column[t] != 0:
                    value = value + row[t] * column[t]
            columns.append(column[:s] + (value,) + column[s + 1 :])
        return tuple(columns)


class CoxeterGroup:
    """Word problem, descents, Bruhat order and parabolic enumeration for a diagram.

    Elements are interned per instance; a run that wants an isolated memo
    simply builds its own group.
    """

    def __init__(self, diagram: CoxeterDiagram, integral: bool | None = None) -> None:
        self.diagram = diagram
        self.nodes = diagram.nodes
        self.rank = len(self.nodes)
        self.representation = RootRepresentation(diagram, integral)
        self._lock = threading.RLock()
        self._ids: dict[Matrix, int] = {}
        self._matrix: list[Matrix] = []
        self._inverse: list[Matrix] = []
        self._length: list[int] = []
        self._right: list[list[int]] = []
        self._left: list[list[int]] = []
        self._shortlex: dict[int, tuple[int, ...]] = {}
        self._by_word: dict[tuple[Node, ...], int] = {}
        self._leq_memo: dict[tuple[int, int], bool] = {}
        identity = self.representation.identity()
        self._intern(identity, identity, 0)

    def __repr__(self) -> str:
        return f"CoxeterGroup({self.diagram})"

    # ---------------------------------------------------------------- interning

    @property
    def interned(self) -> int:
        return len(self._length)

    def _intern(self, matrix: Matrix, inverse: Matrix, length: int) -> int:
        with self._lock:
            found = self._ids.get(matrix)
            if found is not None:
                return found
            eid = len(self._length)
            self._ids[matrix] = eid
            self._matrix.append(matrix)
            self._inverse.append(inverse)
            self._length.append(length)
            self._right.append([-1] * self.rank)
            self._left.append([-1] * self.rank)
            return eid

    def length_of(self, eid: int) -> int:
        return self._length[eid]

    def is_right_descent(self, eid: int, s: int) -> bool:
        return self.representation.is_negative(self._matrix[eid][s])

    def is_left_descent(self, eid: int, s: int) -> bool:
        return self.representation.is_negative(self._inverse[eid][s])

    def right_multiply(self, eid: int, s: int) -> int:
        cached = self._right[eid][s]
        if cached >= 0:
            return cached
        rep = self.representation
        length = self._length[eid] + (-1 if self.is_right_descent(eid, s) else 1)
        result = self._intern(
            rep.times_reflection(self._matrix[eid], s),
            rep.reflection_times(self._inverse[eid], s),
            length,
        )
        self._right[eid][s] = result
        self._right[result][s] = eid
        return result

    def left_multiply(self, s: int, eid: int) -> int:
        cached = self._left[eid][s]
        if cached >= 0:
            return cached
        rep = self.representation
        length = self._length[eid] + (-1 if self.is_left_descent(eid, s) else 1)
        result = self._intern(
            rep.reflection_times(self._matrix[eid], s),
            rep.times_reflection(self._inverse[eid], s),
            length,
        )
        self._left[eid][s] = result
        self._left[result][s] = eid
        return result

    def multiply_ids(self, a: int, b: int) -> int:
        result = a
        for s in self.shortlex_indices(b):
            result = self.right_multiply(result, s)
        return result

    def inverse_id(self, eid: int) -> int:
        result = IDENTITY
        for s in reversed(self.shortlex_indices(eid)):
            result = self.right_multiply(result, s)
        return result

    def word_id(self, letters: Iterable[int]) -> int:
        result = IDENTITY
        for s in letters:
            result = self.right_multiply(result, s)
        return result

    def shortlex_indices(self, eid: int) -> tuple[int, ...]:
        cached = self._shortlex.get(eid)
        if cached is not None:
            return cached
        letters: list[int] = []
        current = eid
        while self._length[current] > 0:
            for s in range(self.rank):
                if self.is_left_descent(current, s):
                    letters.append(s)
                    current = self.left_multiply(s, current)
                    break
        word = tuple(letters)
        self._shortlex[eid] = word
        return word

    def support_ids(self, eid: int) -> frozenset[int]:
        return frozenset(self.shortlex_indices(eid))

    # ---------------------------------------------------------- public values

    def _indices(self, word: Iterable[Node]) -> list[int]:
        index = self.diagram.index
        try:
            return [index[s] for s in word]
        except KeyError as exc:
            raise UnknownNodeError(f"Letter {exc.args[0]} is not a node of {self.diagram}") from None

    def _check(self, element: GroupElement) -> None:
        if element.diagram != self.diagram:
            raise ContextMismatchError(
                f"Element of {element.diagram} used with group of {self.diagram}"
            )

    def element(self, eid: int) -> GroupElement:
        nodes = self.nodes
        return GroupElement(self.diagram, tuple(nodes[s] for s in self.shortlex_indices(eid)))

    def id_of(self, element: GroupElement) -> int:
        self._check(element)
        found = self._by_word.get(element.word)
        if found is None:
            found = self.word_id(self._indices(element.word))
            self._by_word[element.word] = found
        return found

    def id_of_word(self, word: Sequence[Node]) -> int:
        return self.word_id(self._indices(word))

    def parse(self, text: str | Sequence[str] | Sequence[Node]) -> tuple[Node, ...]:
        return self.diagram.parse_word(text)

    def normal_form(self, word: str | Sequence[Node] | Sequence[str]) -> tuple[GroupElement, bool]:
        letters = self.parse(word)
        eid = self.word_id(self._indices(letters))
        return self.element(eid), len(letters) == self._length[eid]

    def __call__(self, word: str | Sequence[Node] | Sequence[str]) -> GroupElement:
        return self.normal_form(word)[0]

    @property
    def identity(self) -> GroupElement:
        return GroupElement(self.diagram, ())

    def group_product(
        self, a: GroupElement, b: GroupElement | None = None, mode: str = "multiply"
    ) -> GroupElement:
        if mode == "invert-a":
            return self.element(self.inverse_id(self.id_of(a)))
        if mode != "multiply" or b is None:
            raise ValueError(f"Unsupported product mode {mode!r}")
        self._check(b)
        return self.element(self.multiply_ids(self.id_of(a), self.id_of(b)))

    def multiply(self, a: GroupElement, b: GroupElement) -> GroupElement:
        return self.group_product(a, b)

    def inverse(self, a: GroupElement) -> GroupElement:
        return self.group_product(a, mode="invert-a")

    def descent_set(self, a: GroupElement, side: str = "right") -> frozenset[Node]:
        eid = self.id_of(a)
        test = self.is_right_descent if side == "right" else self.is_left_descent
        return frozenset(self.nodes[s] for s in range(self.rank) if test(eid, s))

    # ------------------------------------------------------------ Bruhat order

    def leq_ids(self, a: int, b: int) -> bool:
        if a == b or a == IDENTITY:
            return True
        la, lb = self._length[a], self._length[b]
        if la >= lb:
            return False
        key = (a, b)
        cached = self._leq_memo.get(key)
        if cached is not None:
            return cached
        s = next(s for s in range(self.rank) if self.is_left_descent(b, s))
        sb = self.left_multiply(s, b)
        if self.is_left_descent(a, s):
            result = self.leq_ids(self.left_multiply(s, a), sb)
        else:
            result = self.leq_ids(a, sb)
        self._leq_memo[key] = result
        return result

    def bruhat_leq(self, a: GroupElement, b: GroupElement) -> bool:
        return self.leq_ids(self.id_of(a), self.id_of(b))

    def lower_ids(self, eid: int, guard: int) -> set[int]:
        found = {IDENTITY}
        for s in self.shortlex_indices(eid):
            found |= {self.right_multiply(x, s) for x in found}
            if len(found) > guard:
                raise GuardExceededError(
                    f"Bruhat interval exceeds guard {guard}", size=len(found), guard=guard
                )
        return found

    def bruhat_lower_set(self, u: GroupElement, guard: int) -> set[GroupElement]:
        return {self.element(x) for x in self.lower_ids(self.id_of(u), guard)}

    # ------------------------------------------------- parabolic enumeration

    def subset_indices(self, subset: Iterable[Node]) -> tuple[int, ...]:
        return tuple(sorted(self._indices(subset)))

    def require_spherical(self, subset: Iterable[Node]) -> FiniteTypeDecomposition:
        result = classify_spherical(self.diagram, subset)
        if not isinstance(result, FiniteTypeDecomposition):
            raise NonSphericalError(
                f"Subset {self.diagram.format_subset(subset)} of {self.diagram} is not spherical",
                offending=self.diagram.format_subset(result.offending),
            )
        return result

    def is_finite(self) -> bool:
        return classify_spherical(self.diagram).finite

    def enumerate_ids(
        self,
        generators: Iterable[int],
        bound: int | None = None,
        avoid_right: Iterable[int] = (),
    ) -> list[int]:
        """Breadth-first walk over the elements generated by ``generators``.

        With ``avoid_right`` the walk keeps only elements with no right descent
        in it (minimal left coset representatives). That set is closed under
        deleting a left descent, so it grows by left multiplication there.
        ``bound`` caps the length.
        """
        gens = tuple(generators)
        avoid = tuple(avoid_right)
        layer = [IDENTITY]
        seen = {IDENTITY}
        result = [IDENTITY]
        length = 0
        while layer and (bound is None or length < bound):
            following = []
            for x in layer:
                for s in gens:
                    if avoid:
                        if self.is_left_descent(x, s):
                            continue
                        y = self.left_multiply(s, x)
                    else:
                        if self.is_right_descent(x, s):
                            continue
                        y = self.right_multiply(x, s)
                    if y in seen:
                        continue
                    if any(self.is_right_descent(y, t) for t in avoid):
                        continue
                    seen.add(y)
                    following.append(y)
            result.extend(following)
            layer = following
            length += 1
        return result

    def sorted_elements(self, ids: Iterable[int]) -> list[GroupElement]:
        return sorted((self.element(x) for x in ids), key=lambda g: g.sort_key)

    def enumerate_coxeter(
        self, subset: Iterable[Node] | None = None, bound: int | None = None
    ) -> list[GroupElement]:
        chosen = tuple(self.nodes if subset is None else subset)
        if bound is None:
            self.require_spherical(chosen)
        ids = self.enumerate_ids(self.subset_indices(chosen), bound)
        logger.debug(f"Enumerated {len(ids)} elements of W_I in {self.diagram}")
        return self.sorted_elements(ids)

    def in_parabolic(self, eid: int, subset: Iterable[int]) -> bool:
        return self.support_ids(eid) <= frozenset(subset)

    def strip_to_minimal(self, eid: int, subset: Sequence[int]) -> tuple[int, int, int]:
        """Minimal double coset representative of ``eid`` with the two stripped lengths."""
        left_removed = right_removed = 0
        current = eid
        changed = True
        while changed:
            changed = False
            for s in subset:
                if self.is_left_descent(current, s):
                    current = self.left_multiply(s, current)
                    left_removed += 1
                    changed = True
                if self.is_right_descent(current, s):
                    current = self.right_multiply(current, s)
                    right_removed += 1
                    changed = True
        return current, left_removed, right_removed

    def is_reduced_for(self, eid: int, subset: Sequence[int]) -> bool:
        return not any(
            self.is_left_descent(eid, s) or self.is_right_descent(eid, s) for s in subset
        )

    def stabilizer(self, eid: int, subset: Sequence[int]) -> frozenset[int]:
        """I ∩ wIw^-1 for an I-reduced w, read from the columns of M(w^-1)."""
        inverse = self._inverse[eid]
        inside = frozenset(subset)
        found = set()
        for s in subset:
            support = [t for t, value in enumerate(inverse[s]) if value != 0]
            if len(support) == 1 and support[0] in inside:
                found.add(s)
        return frozenset(found)

    def double_coset_ids(self, subset: Sequence[int], bound: int | None = None) -> list[int]:
        minimal = self.enumerate_ids(range(self.rank), bound, avoid_right=subset)
        return [
            x for x in minimal if not any(self.is_left_descent(x, s) for s in subset)
        ]

    def double_cosets(
        self, subset: Iterable[Node], bound: int | None = None
    ) -> list[DoubleCosetRecord]:
        chosen = tuple(subset)
        decomposition = self.require_spherical(chosen)
        if bound is None and not self.is_finite():
            raise NonSphericalError(
                f"{self.diagram} is infinite; a length bound is required"
            )
        indices = self.subset_indices(chosen)
        order_i = decomposition.order
        records = []
        for x in self.double_coset_ids(indices, bound):
            stabilizer = self.stabilizer(x, indices)
            stabilizer_nodes = frozenset(self.nodes[s] for s in stabilizer)
            quotient = order_i // parabolic_order(self.diagram, stabilizer_nodes)
            records.append(
                DoubleCosetRecord(
                    min_rep=self.element(x),
                    stabilizer_subset=stabilizer_nodes,
                    coset_size=quotient * order_i,
                    left_quotient_size=quotient,
                    involution=self.inverse_id(x) == x,
                )
            )
        records.sort(key=lambda r: r.min_rep.sort_key)
        logger.info(
            f"{len(records)} double cosets of W_I in {self.diagram}"
            + (f" up to length {bound}" if bound is not None else "")
        )
        return records

    def longest_id(self, subset: Sequence[int]) -> int:
        current = IDENTITY
        while True:
            step = next((s for s in subset if not self.is_right_descent(current, s)), None)
            if step is None:
                return current
            current = self.right_multiply(current, step)

    def longest_element(
        self, subset: Iterable[Node] | None = None
    ) -> tuple[GroupElement, dict[Node, Node]]:
        chosen = tuple(self.nodes if subset is None else subset)
        self.require_spherical(chosen)
        indices = self.subset_indices(chosen)
        w0 = self.longest_id(indices)
        matrix = self._matrix[w0]
        opposition = {}
        for s in indices:
            support = [t for t, value in enumerate(matrix[s]) if value != 0]
            opposition[self.nodes[s]] = self.nodes[support[0]]
        return self.element(w0), opposition
