"""Coxeter diagrams: parsing, finite-type recognition, automorphisms.

A diagram is an immutable value. Nodes are ``Node(component, label)`` pairs
ordered lexicographically, which is also the letter order used for ShortLex
normal forms. Node 0 of an attachment or affine diagram is ``Node(0, 0)``.
"""

import logging
import math
import re
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple

from core.exceptions import DiagramParseError, NonSphericalError, UnknownNodeError
from coxeter import catalog

logger = logging.getLogger(__name__)

INF = math.inf
Bond = int | float


class Node(NamedTuple):
    component: int
    label: int

    @property
    def display(self) -> str:
        return f"{self.label}" + "'" * self.component


ATTACHMENT_NODE = Node(0, 0)


@dataclass(frozen=True)
class CoxeterDiagram:
    nodes: tuple[Node, ...]
    bond_items: tuple[tuple[Node, Node, Bond], ...]
    name: str = ""
    affine_family: tuple[str, int] | None = None
    _lookup: dict[frozenset[Node], Bond] = field(
        default_factory=dict, compare=False, hash=False, repr=False
    )

    def __post_init__(self) -> None:
        lookup: dict[frozenset[Node], Bond] = {}
        for s, t, m in self.bond_items:
            lookup[frozenset((s, t))] = m
        object.__setattr__(self, "_lookup", lookup)

    @classmethod
    def from_bonds(
        cls,
        nodes: Iterable[Node],
        bonds: Mapping[frozenset[Node], Bond],
        name: str = "",
        affine_family: tuple[str, int] | None = None,
    ) -> "CoxeterDiagram":
        ordered = tuple(sorted(set(nodes)))
        items = []
        for pair, m in bonds.items():
            if m == 2:
                continue
            s, t = sorted(pair)
            items.append((s, t, m))
        return cls(ordered, tuple(sorted(items)), name, affine_family)

    @property
    def rank(self) -> int:
        return len(self.nodes)

    @cached_property
    def index(self) -> dict[Node, int]:
        return {node: i for i, node in enumerate(self.nodes)}

    @cached_property
    def by_display(self) -> dict[str, Node]:
        return {node.display: node for node in self.nodes}

    def m(self, s: Node, t: Node) -> Bond:
        if s == t:
            return 1
        return self._lookup.get(frozenset((s, t)), 2)

    def neighbours(self, s: Node) -> list[Node]:
        return [t for t in self.nodes if t != s and self.m(s, t) != 2]

    def bonds(self) -> dict[frozenset[Node], Bond]:
        return dict(self._lookup)

    def finite_bonds(self) -> set[int]:
        return {int(m) for m in self._lookup.values() if m != INF}

    def node(self, label: str) -> Node:
        try:
            return self.by_display[label.strip()]
        except KeyError:
            raise UnknownNodeError(
                f"Unknown node label {label!r} for diagram {self.name or self}",
                label=label,
            ) from None

    def subset(self, labels: Iterable[str | Node]) -> frozenset[Node]:
        result = set()
        for label in labels:
            if isinstance(label, Node):
                if label not in self.index:
                    raise UnknownNodeError(f"Node {label} is not in the diagram")
                result.add(label)
            else:
                result.add(self.node(str(label)))
        return frozenset(result)

    def complement(self, removed: Iterable[str | Node]) -> frozenset[Node]:
        return frozenset(self.nodes) - self.subset(removed)

    def parse_word(self, text: str | Sequence[str] | Sequence[Node]) -> tuple[Node, ...]:
        """Read a word given as space separated labels or as a compact string.

        Compact strings like ``03243120`` or ``11'34567`` are split letter by
        letter when every display label is a single digit.
        """
        if not isinstance(text, str):
            return tuple(
                item if isinstance(item, Node) else self.node(item) for item in text
            )
        text = text.strip()
        if text in ("", "e"):
            return ()
        letters: list[Node] = []
        single_digit = all(len(node.display.rstrip("'")) == 1 for node in self.nodes)
        for token in text.split():
            if token in self.by_display:
                letters.append(self.by_display[token])
            elif single_digit and re.fullmatch(r"(\d'*)+", token):
                letters.extend(self.node(part) for part in re.findall(r"\d'*", token))
            else:
                raise UnknownNodeError(
                    f"Cannot read {token!r} as letters of {self.name or 'diagram'}",
                    token=token,
                )
        return tuple(letters)

    def format_word(self, word: Iterable[Node]) -> str:
        return " ".join(node.display for node in word)

    def format_subset(self, subset: Iterable[Node]) -> list[str]:
        return [node.display for node in sorted(subset)]

    def induced(self, subset: Iterable[Node]) -> "CoxeterDiagram":
        keep = set(subset)
        bonds = {
            pair: m for pair, m in self._lookup.items() if pair <= keep
        }
        return CoxeterDiagram.from_bonds(keep, bonds)

    def components(self, subset: Iterable[Node] | None = None) -> list[tuple[Node, ...]]:
        remaining = set(self.nodes if subset is None else subset)
        found = []
        while remaining:
            start = min(remaining)
            stack, seen = [start], {start}
            while stack:
                s = stack.pop()
                for t in self.neighbours(s):
                    if t in remaining and t not in seen:
                        seen.add(t)
                        stack.append(t)
            remaining -= seen
            found.append(tuple(sorted(seen)))
        return found

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    def to_spec(self) -> str:
        return format_diagram(self)

    def __str__(self) -> str:
        return self.name or format_diagram(self)


# --------------------------------------------------------------------------
# Parsing
# --------------------------------------------------------------------------

_COMPONENT_RE = re.compile(
    r"^(?P<family>~?[A-H]|I2\((?P<m>\d+)\))_?(?P<rank>\d+)?"
    r"(?:\^(?:\{(?P<sup>[^}]*)\}|(?P<single>\d)))?$"
)
_MATRIX_RE = re.compile(r"^matrix\{(?P<body>.*)\}$", re.DOTALL)
_PRODUCT_SPLIT = re.compile(r"\s+x\s+|\s*×\s*")


def _parse_bond(text: str, spec: str) -> Bond:
    text = text.strip().lower()
    if text in ("inf", "infinity", "∞", "oo"):
        return INF
    try:
        m = int(text)
    except ValueError:
        raise DiagramParseError(f"Bad bond value {text!r} in {spec!r}") from None
    if m < 2:
        raise DiagramParseError(f"Bond must be at least 2, got {m} in {spec!r}")
    return m


def _parse_matrix(body: str, spec: str) -> CoxeterDiagram:
    parts = [p.strip() for p in body.split(";") if p.strip()]
    if not parts:
        raise DiagramParseError(f"Empty matrix form {spec!r}")
    try:
        n = int(parts[0])
    except ValueError:
        raise DiagramParseError(f"Matrix form must start with the rank: {spec!r}") from None
    if n < 1:
        raise DiagramParseError(f"Rank must be positive in {spec!r}")

    edges: list[tuple[int, int, Bond]] = []
    for entry in parts[1:]:
        match = re.fullmatch(r"(\d+)\s*-\s*(\d+)\s*:\s*(\S+)", entry)
        if not match:
            raise DiagramParseError(f"Malformed bond entry {entry!r} in {spec!r}")
        i, j = int(match.group(1)), int(match.group(2))
        edges.append((i, j, _parse_bond(match.group(3), spec)))

    uses_zero = any(0 in (i, j) for i, j, _ in edges)
    labels = range(0, n) if uses_zero else range(1, n + 1)
    nodes = [Node(0, label) for label in labels]
    bonds: dict[frozenset[Node], Bond] = {}
    for i, j, m in edges:
        if i == j or i not in labels or j not in labels:
            raise DiagramParseError(f"Bond {i}-{j} does not join two nodes in {spec!r}")
        pair = frozenset((Node(0, i), Node(0, j)))
        if pair in bonds:
            raise DiagramParseError(f"Duplicate bond {i}-{j} in {spec!r}")
        bonds[pair] = m
    return CoxeterDiagram.from_bonds(nodes, bonds, name=spec)


def _family_edges(family: str, rank: int | None, m: int | None, spec: str) -> list[catalog.Edge]:
    if family == "I2":
        if m is None or m < 3:
            raise DiagramParseError(f"I2(m) needs m >= 3 in {spec!r}")
        if rank not in (None, 2):
            raise DiagramParseError(f"I2(m) has rank 2 in {spec!r}")
        return catalog.dihedral_edges(m)
    if rank is None:
        raise DiagramParseError(f"Missing rank for family {family} in {spec!r}")
    if not catalog.rank_in_range(family, rank):
        raise DiagramParseError(
            f"Rank {rank} out of range for family {family} in {spec!r}",
            family=family,
            rank=rank,
        )
    if family.startswith("~"):
        return catalog.affine_edges(family, rank)
    return catalog.spherical_edges(family, rank)


def parse_diagram(spec: str) -> CoxeterDiagram:
    """Build a diagram from the naming notation, e.g. ``"D5^{3}"`` or ``"~E8"``."""
    text = spec.strip()
    matrix = _MATRIX_RE.match(text)
    if matrix:
        return _parse_matrix(matrix.group("body"), text)

    pieces = [p.strip() for p in _PRODUCT_SPLIT.split(text) if p.strip()]
    if not pieces:
        raise DiagramParseError("Empty diagram specification")

    nodes: set[Node] = set()
    bonds: dict[frozenset[Node], Bond] = {}
    affine_family: tuple[str, int] | None = None
    attached = False

    for component, piece in enumerate(pieces):
        match = _COMPONENT_RE.match(piece)
        if not match:
            raise DiagramParseError(f"Unknown family name in {piece!r}", spec=spec)
        family = match.group("family")
        m = int(match.group("m")) if match.group("m") else None
        if family.startswith("I2"):
            family = "I2"
        rank = int(match.group("rank")) if match.group("rank") else None
        edges = _family_edges(family, rank, m, spec)

        if family.startswith("~"):
            if len(pieces) > 1 or match.group("sup") is not None or match.group("single"):
                raise DiagramParseError(
                    f"Affine family {family} cannot be combined with attachments: {spec!r}"
                )
            assert rank is not None
            affine_family = (family, rank)

        labels = {i for edge in edges for i in edge[:2]}
        if family == "A" and rank == 1:
            labels = {1}
        nodes |= {Node(component, i) for i in labels}
        for i, j, bond in edges:
            bonds[frozenset((Node(component, i), Node(component, j)))] = bond

        sup = match.group("sup")
        if sup is None and match.group("single"):
            sup = match.group("single")
        if sup is not None:
            indices = [s.strip() for s in sup.split(",")]
            if not indices or any(not s.isdigit() for s in indices):
                raise DiagramParseError(f"Malformed superscript in {piece!r}")
            counts: dict[int, int] = {}
            for s in indices:
                counts[int(s)] = counts.get(int(s), 0) + 1
            for label, multiplicity in counts.items():
                if label not in labels:
                    raise DiagramParseError(
                        f"Superscript index {label} is not a node of {piece!r}"
                    )
                if multiplicity > 3:
                    raise DiagramParseError(
                        f"Superscript multiplicity {multiplicity} is not supported in {piece!r}"
                    )
                bonds[frozenset((ATTACHMENT_NODE, Node(component, label)))] = (
                    2 + multiplicity
                )
            attached = True

    if attached:
        nodes.add(ATTACHMENT_NODE)
    diagram = CoxeterDiagram.from_bonds(nodes, bonds, name=text, affine_family=affine_family)
    logger.debug(f"Parsed diagram {text!r} with {diagram.rank} nodes")
    return diagram


def format_diagram(d: CoxeterDiagram) -> str:
    """Canonical explicit form; ``parse_diagram`` reads it back up to isomorphism."""
    relabel = {node: i + 1 for i, node in enumerate(d.nodes)}
    entries = [str(d.rank)]
    for s, t, m in d.bond_items:
        value = "inf" if m == INF else str(int(m))
        entries.append(f"{relabel[s]}-{relabel[t]}:{value}")
    return "matrix{" + "; ".join(entries) + "}"


# --------------------------------------------------------------------------
# Finite-type recognition
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class FiniteComponent:
    family: str
    rank: int
    correspondence: tuple[tuple[int, Node], ...]
    order: int

    @property
    def name(self) -> str:
        if self.family.startswith("I2") or self.family[-1].isdigit():
            return self.family
        return f"{self.family}{self.rank}"

    def node_for(self, label: int) -> Node:
        return dict(self.correspondence)[label]


@dataclass(frozen=True)
class FiniteTypeDecomposition:
    components: tuple[FiniteComponent, ...]
    order: int
    finite: bool = True

    @property
    def type_name(self) -> str:
        return " x ".join(c.name for c in self.components) or "trivial"


@dataclass(frozen=True)
class NotFinite:
    offending: tuple[Node, ...]
    finite: bool = False


def _walk(d: CoxeterDiagram, start: Node, previous: Node | None, allowed: set[Node]) -> list[Node]:
    path = [start]
    prev, current = previous, start
    while True:
        nxt = [t for t in d.neighbours(current) if t in allowed and t != prev]
        if len(nxt) != 1:
            return path
        prev, current = current, nxt[0]
        path.append(current)


def _recognise(d: CoxeterDiagram, nodes: tuple[Node, ...]) -> FiniteComponent | None:
    allowed = set(nodes)
    n = len(nodes)
    if n == 1:
        return FiniteComponent("A", 1, ((1, nodes[0]),), 2)

    edges = [
        (s, t, d.m(s, t))
        for i, s in enumerate(nodes)
        for t in nodes[i + 1 :]
        if d.m(s, t) != 2
    ]
    if any(m == INF for _, _, m in edges) or len(edges) != n - 1:
        return None
    degree = {s: sum(1 for t in d.neighbours(s) if t in allowed) for s in nodes}
    branches = [s for s in nodes if degree[s] >= 3]

    if branches:
        if len(branches) > 1 or degree[branches[0]] > 3:
            return None
        if any(m != 3 for _, _, m in edges):
            return None
        b = branches[0]
        arms = sorted(
            (_walk(d, t, b, allowed) for t in d.neighbours(b) if t in allowed),
            key=lambda arm: (len(arm), arm[0]),
        )
        lengths = tuple(len(arm) for arm in arms)
        if lengths[0] == 1 and lengths[1] == 1:
            rank = n
            short_a, short_b, long_arm = arms[0], arms[1], arms[2]
            corr = [(rank - 2, b), (rank - 1, short_a[0]), (rank, short_b[0])]
            corr += [(rank - 3 - i, node) for i, node in enumerate(long_arm)]
            return FiniteComponent("D", rank, tuple(sorted(corr)), catalog.catalog_order("D", rank))
        if lengths[0] == 1 and lengths[1] == 2 and lengths[2] in (2, 3, 4):
            rank = n
            corr = [(4, b), (2, arms[0][0]), (3, arms[1][0]), (1, arms[1][1])]
            corr += [(5 + i, node) for i, node in enumerate(arms[2])]
            family = f"E{rank}"
            return FiniteComponent(family, rank, tuple(sorted(corr)), catalog.catalog_order(family, rank))
        return None

    ends = sorted(s for s in nodes if degree[s] == 1)
    path = _walk(d, ends[0], None, allowed)
    bonds = [d.m(path[i], path[i + 1]) for i in range(n - 1)]

    def numbered(p: list[Node]) -> tuple[tuple[int, Node], ...]:
        return tuple((i + 1, node) for i, node in enumerate(p))

    if n == 2:
        m = int(bonds[0])
        if m == 3:
            return FiniteComponent("A", 2, numbered(path), 6)
        if m == 4:
            return FiniteComponent("B", 2, numbered(path), 8)
        return FiniteComponent(f"I2({m})", 2, numbered(path), 2 * m)

    special = [(i, m) for i, m in enumerate(bonds) if m != 3]
    if not special:
        return FiniteComponent("A", n, numbered(path), catalog.catalog_order("A", n))
    if len(special) > 1:
        return None
    position, m = special[0]
    if position == 0:
        path.reverse()
        position = n - 2
    if m == 4 and position == n - 2:
        return FiniteComponent("B", n, numbered(path), catalog.catalog_order("B", n))
    if m == 4 and n == 4 and position in (1,):
        return FiniteComponent("F4", 4, numbered(path), catalog.catalog_order("F4", 4))
    if m == 5 and position == n - 2 and n in (3, 4):
        family = f"H{n}"
        return FiniteComponent(family, n, numbered(path), catalog.catalog_order(family, n))
    return None


def classify_spherical(
    d: CoxeterDiagram, subset: Iterable[Node] | None = None
) -> FiniteTypeDecomposition | NotFinite:
    """Match each component of the induced subdiagram against the finite catalog."""
    chosen = frozenset(d.nodes if subset is None else subset)
    missing = chosen - set(d.nodes)
    if missing:
        raise UnknownNodeError(f"Nodes {sorted(missing)} are not in the diagram")
    found = []
    order = 1
    for component in d.components(chosen):
        recognised = _recognise(d, component)
        if recognised is None:
            return NotFinite(component)
        found.append(recognised)
        order *= recognised.order
    return FiniteTypeDecomposition(tuple(found), order)


def is_spherical(d: CoxeterDiagram, subset: Iterable[Node] | None = None) -> bool:
    return classify_spherical(d, subset).finite


def parabolic_order(d: CoxeterDiagram, subset: Iterable[Node]) -> int:
    result = classify_spherical(d, subset)
    if not isinstance(result, FiniteTypeDecomposition):
        raise NonSphericalError(
            "Subset does not generate a finite parabolic subgroup",
            offending=d.format_subset(result.offending),
        )
    return result.order


# --------------------------------------------------------------------------
# Conjugacy classes and automorphisms
# --------------------------------------------------------------------------


def generator_conjugacy_classes(d: CoxeterDiagram) -> tuple[frozenset[Node], ...]:
    parent = {s: s for s in d.nodes}

    def find(s: Node) -> Node:
        while parent[s] != s:
            parent[s] = parent[parent[s]]
            s = parent[s]
        return s

    for s, t, m in d.bond_items:
        if m != INF and int(m) % 2 == 1:
            a, b = find(s), find(t)
            if a != b:
                parent[max(a, b)] = min(a, b)

    classes: dict[Node, set[Node]] = {}
    for s in d.nodes:
        classes.setdefault(find(s), set()).add(s)
    return tuple(frozenset(c) for c in sorted(classes.values(), key=min))


def _isomorphisms(
    source: CoxeterDiagram,
    target: CoxeterDiagram,
    fix: frozenset[Node] | None = None,
) -> Iterator[dict[Node, Node]]:
    if source.rank != target.rank:
        return

    def signature(d: CoxeterDiagram, s: Node) -> tuple:
        return tuple(sorted(str(d.m(s, t)) for t in d.neighbours(s)))

    candidates = {
        s: [
            t
            for t in target.nodes
            if signature(source, s) == signature(target, t)
            and (fix is None or (s in fix) == (t in fix))
        ]
        for s in source.nodes
    }
    order = list(source.nodes)
    mapping: dict[Node, Node] = {}
    used: set[Node] = set()

    def extend(position: int) -> Iterator[dict[Node, Node]]:
        if position == len(order):
            yield dict(mapping)
            return
        s = order[position]
        for t in candidates[s]:
            if t in used:
                continue
            if all(source.m(s, u) == target.m(t, mapping[u]) for u in order[:position]):
                mapping[s] = t
                used.add(t)
                yield from extend(position + 1)
                used.discard(t)
                del mapping[s]

    yield from extend(0)


def find_isomorphism(a: CoxeterDiagram, b: CoxeterDiagram) -> dict[Node, Node] | None:
    return next(_isomorphisms(a, b), None)


@dataclass(frozen=True)
class Symmetry:
    automorphisms: tuple[tuple[tuple[Node, Node], ...], ...]
    special_vertices: frozenset[Node] | None

    def permutations(self) -> list[dict[Node, Node]]:
        return [dict(p) for p in self.automorphisms]


def symmetry(d: CoxeterDiagram, fix: Iterable[Node] | None = None) -> Symmetry:
    """All bond-preserving permutations (fixing ``fix`` setwise) and special vertices."""
    fixed = frozenset(fix) if fix is not None else None
    perms = sorted(
        tuple(sorted(p.items())) for p in _isomorphisms(d, d, fixed)
    )
    special = None
    if d.affine_family is not None:
        full = perms if fixed is None else [
            tuple(sorted(p.items())) for p in _isomorphisms(d, d)
        ]
        special = frozenset(dict(p)[ATTACHMENT_NODE] for p in full)
    return Symmetry(tuple(perms), special)


def special_vertices(d: CoxeterDiagram) -> frozenset[Node]:
    found = symmetry(d).special_vertices
    if found is None:
        raise DiagramParseError(f"{d} is not a named affine diagram")
    return found
