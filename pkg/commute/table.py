"""The library of noncommutativity witnesses and its line-oriented data format.

Each data line reads::

    row_id | diagram | u | w_I | i | k | star | key=value; key=value

Words are node labels, compact (``03243120``) or space separated. Rows of a
parametrized family carry ``template=<name>`` and ``-`` in the word columns;
the template produces the diagram, words and labels for every in-range
parameter.
"""

import logging
from collections.abc import Callable, Iterator
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

from core.config import application_config
from core.exceptions import HeckeError, TableDataError
from coxeter.diagram import CoxeterDiagram, Node, parse_diagram
from coxeter.group import CoxeterGroup

logger = logging.getLogger(__name__)

COLUMNS = 7

Params = dict[str, int]


def _desc(high: int, low: int) -> list[int]:
    return list(range(high, low - 1, -1))


def _asc(low: int, high: int) -> list[int]:
    return list(range(low, high + 1))


@dataclass(frozen=True)
class Instance:
    diagram: str
    u: list[int]
    w_I: list[int]
    i: int
    k: int


def _d_family(n: int, i: int) -> Instance:
    u: list[int] = []
    for top in range(i, n):
        u += _desc(top, top - (n - i) + 1)
    # u uses no letter below 2i-n+1; a run starting lower would commute to the front.
    w_I = [n] + _desc(n - 2, i + 1) + _asc(max(1, 2 * i - n), i - 1)
    return Instance(f"D{n}", u, w_I, i, n)


def _b_affine(n: int, i: int) -> Instance:
    u = _desc(i, 2) + [0] + _asc(1, i)
    w_I = _asc(i + 1, n) + _desc(n - 1, i + 1)
    return Instance(f"~B{n}", u, w_I, i, i + 1)


def _b_affine_last(n: int, i: int) -> Instance:
    u: list[int] = []
    for low in range(1, n + 1):
        u += _desc(n, low)
    return Instance(f"~B{n}", u, [0] + _asc(2, n - 1), n, 0)


def _c_affine(n: int, i: int) -> Instance:
    u = _desc(i, 1) + [0] + _asc(1, i)
    w_I = _asc(i + 1, n) + _desc(n - 1, i + 1)
    return Instance(f"~C{n}", u, w_I, i, i + 1)


def _d_affine(n: int, i: int) -> Instance:
    u = _desc(i, 2) + [0] + _asc(1, i)
    w_I = _asc(i + 1, n) + _desc(n - 2, i + 1)
    return Instance(f"~D{n}", u, w_I, i, i + 1)


@dataclass(frozen=True)
class Template:
    build: Callable[[int, int], Instance]
    min_rank: int
    indices: Callable[[int], range]
    row_format: str


TEMPLATES: dict[str, Template] = {
    "D_ni": Template(_d_family, 5, lambda n: range(n // 2 + 1, n - 1), "D_{{{n},{i}}}"),
    "~B_ni": Template(_b_affine, 4, lambda n: range(2, n - 1), "~B_{{{n},{i}}}"),
    "~B_nn": Template(_b_affine_last, 3, lambda n: range(n, n + 1), "~B_{{{n},{n}}}"),
    "~C_ni": Template(_c_affine, 2, lambda n: range(1, n), "~C_{{{n},{i}}}"),
    "~D_ni": Template(_d_affine, 4, lambda n: range(2, n - 1), "~D_{{{n},{i}}}"),
}


@dataclass(frozen=True)
class TableRow:
    row_id: str
    diagram_spec: str
    u: str
    w_I: str
    i: str
    k: str
    star: bool
    fields: dict[str, str] = field(default_factory=dict, compare=False)
    params: tuple[tuple[str, int], ...] = ()

    @property
    def template(self) -> str | None:
        return self.fields.get("template")

    @property
    def parametrized(self) -> bool:
        return self.template is not None and not self.params

    @property
    def anchor(self) -> str:
        return self.fields.get("anchor", "first-two")

    @property
    def at_least(self) -> int | None:
        value = self.fields.get("at_least")
        return int(value) if value is not None else None

    @property
    def expected_classes(self) -> int | None:
        value = self.fields.get("classes")
        return int(value) if value is not None else None

    @cached_property
    def diagram(self) -> CoxeterDiagram:
        if self.parametrized:
            raise TableDataError(f"Row {self.row_id} needs parameters")
        return parse_diagram(self.diagram_spec)

    @property
    def removed(self) -> Node:
        return self.diagram.node(self.i)

    @property
    def subset(self) -> frozenset[Node]:
        return self.diagram.complement([self.i])

    def words(self) -> tuple[tuple[Node, ...], tuple[Node, ...], Node, Node]:
        d = self.diagram
        return d.parse_word(self.u), d.parse_word(self.w_I), d.node(self.i), d.node(self.k)

    def parameter_space(self, max_rank: int | None = None) -> list[Params]:
        if self.template is None:
            return [{}]
        spec = TEMPLATES[self.template]
        top = max_rank or application_config.FAMILY_MAX_RANK
        return [
            {"n": n, "i": i}
            for n in range(spec.min_rank, top + 1)
            for i in spec.indices(n)
        ]

    def instantiate(self, params: Params | None = None) -> "TableRow":
        if self.template is None or self.params:
            return self
        if not params or "n" not in params:
            raise TableDataError(f"Row {self.row_id} needs the parameter n", row=self.row_id)
        spec = TEMPLATES[self.template]
        n = params["n"]
        i = params.get("i", n)
        if n < spec.min_rank or i not in spec.indices(n):
            raise TableDataError(
                f"Parameters n={n}, i={i} are out of range for {self.row_id}",
                row=self.row_id,
                n=n,
                i=i,
            )
        made = spec.build(n, i)
        return TableRow(
            row_id=spec.row_format.format(n=n, i=i),
            diagram_spec=made.diagram,
            u=" ".join(map(str, made.u)),
            w_I=" ".join(map(str, made.w_I)),
            i=str(made.i),
            k=str(made.k),
            star=self.star,
            fields=dict(self.fields),
            params=(("n", n), ("i", i)),
        )

    def instances(self, max_rank: int | None = None) -> Iterator["TableRow"]:
        for params in self.parameter_space(max_rank):
            yield self.instantiate(params)

    def validate(self, group: CoxeterGroup | None = None) -> None:
        """w = u·w_I·i must be reduced and I-reduced, with w_I inside W_I."""
        d = self.diagram
        group = group or CoxeterGroup(d)
        u, w_I, i, k = self.words()
        subset = self.subset
        if i in subset or k not in d.nodes:
            raise TableDataError(f"Row {self.row_id} has inconsistent labels", row=self.row_id)
        if any(s not in subset for s in w_I):
            raise TableDataError(f"w_I of {self.row_id} leaves W_I", row=self.row_id)
        word = u + w_I + (i,)
        element, reduced = group.normal_form(word)
        indices = group.subset_indices(subset)
        if not reduced or not group.is_reduced_for(group.id_of(element), indices):
            raise TableDataError(
                f"Word of {self.row_id} is not reduced and I-reduced",
                row=self.row_id,
                word=d.format_word(word),
            )

    def __str__(self) -> str:
        return self.row_id


def parse_row(line: str, number: int = 0) -> TableRow:
    parts = [p.strip() for p in line.split("|")]
    if len(parts) < COLUMNS or len(parts) > COLUMNS + 1:
        raise TableDataError(f"Line {number}: expected {COLUMNS} or {COLUMNS + 1} columns", line=number)
    row_id, diagram, u, w_I, i, k, star = parts[:COLUMNS]
    fields: dict[str, str] = {}
    if len(parts) > COLUMNS and parts[COLUMNS]:
        for entry in parts[COLUMNS].split(";"):
            if not entry.strip():
                continue
            key, sep, value = entry.partition("=")
            if not sep:
                raise TableDataError(f"Line {number}: malformed field {entry!r}", line=number)
            fields[key.strip()] = value.strip()
    if star not in ("*", "-", ""):
        raise TableDataError(f"Line {number}: star column must be '*' or '-'", line=number)
    template = fields.get("template")
    if template is not None and template not in TEMPLATES:
        raise TableDataError(f"Line {number}: unknown template {template!r}", line=number)
    if template is None and "-" in (u, w_I, i, k):
        raise TableDataError(f"Line {number}: fixed row {row_id} has empty columns", line=number)
    if star == "*" and fields.get("anchor") == "last-two" and "at_least" not in fields:
        raise TableDataError(f"Line {number}: last-two pattern needs at_least", line=number)
    return TableRow(row_id, diagram, u, w_I, i, k, star == "*", fields)


def load_table(path: Path | str | None = None, validate: bool = False) -> list[TableRow]:
    """Read every row; with ``validate`` each fixed row's word is checked as well."""
    source = Path(path) if path is not None else application_config.TABLE_PATH
    try:
        text = source.read_text(encoding="utf-8")
    except OSError as exc:
        raise TableDataError(f"Cannot read table {source}: {exc}") from None
    rows = []
    seen = set()
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        row = parse_row(line, number)
        if row.row_id in seen:
            raise TableDataError(f"Line {number}: duplicate row {row.row_id}", line=number)
        seen.add(row.row_id)
        if validate and row.template is None:
            try:
                row.validate()
            except TableDataError:
                raise
            except HeckeError as exc:
                raise TableDataError(f"Line {number}: {exc.message}", line=number) from None
        rows.append(row)
    logger.info(f"Loaded {len(rows)} table rows from {source}")
    return rows


def find_row(rows: list[TableRow], row_id: str) -> TableRow:
    wanted = row_id.strip()
    for row in rows:
        if row.row_id == wanted:
            return row
    raise TableDataError(f"No table row named {wanted!r}", row=wanted)


def parse_params(text: str | None) -> Params:
    """``n=7,i=5`` to a parameter map."""
    if not text:
        return {}
    params: Params = {}
    for entry in text.split(","):
        key, sep, value = entry.partition("=")
        if not sep or not value.strip().isdigit():
            raise TableDataError(f"Malformed parameter {entry!r}")
        params[key.strip()] = int(value)
    return params
