"""Command-line front end, exposed as ``manage.py hecke <subcommand>``.

Exit codes: 0 when every requested verdict is decided, 2 when any is
inconclusive, 1 for usage or data errors.
"""

import json
import logging
import os
import sys
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from typing import Any

from django.core.management.base import CommandError, CommandParser

from core.exceptions import HeckeError
from coxeter.diagram import CoxeterDiagram, Node, parse_diagram
from coxeter.group import CoxeterGroup
from hecke.polynomials import ParamRing, format_polynomial, poincare_polynomial
from commute.certificates import Certificate, Method, Verdict
from commute.classification import classify, select_subset
from commute.scan import direct_commutativity_scan
from commute.table import find_row, load_table, parse_params
from commute.verifiers import verify_cor26, verify_prop27, verify_star, verify_table, verify_table_row
from commute.witnesses import (
    ExplicitWitness,
    claim1_witness,
    involution_report,
    lift_witness,
    opposition_commutativity,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INCONCLUSIVE = 2


@dataclass
class Outcome:
    payload: Any
    text: str
    certificates: list[Certificate] = field(default_factory=list)

    @property
    def inconclusive(self) -> bool:
        return any(c.verdict == Verdict.INCONCLUSIVE for c in self.certificates)


def _labels(value: str | None) -> list[str] | None:
    if value is None:
        return None
    return [part.strip() for part in value.split(",") if part.strip()]


def _diagram(options: dict[str, Any]) -> CoxeterDiagram:
    if not options.get("diagram"):
        raise CommandError("--diagram is required", returncode=EXIT_ERROR)
    return parse_diagram(options["diagram"])


def _case(options: dict[str, Any]) -> tuple[CoxeterDiagram, frozenset[Node]]:
    d = _diagram(options)
    return d, select_subset(d, _labels(options.get("remove")), _labels(options.get("subset")))


def _require(options: dict[str, Any], *names: str) -> None:
    missing = [f"--{name}" for name in names if not options.get(name)]
    if missing:
        raise CommandError(f"Missing {', '.join(missing)}", returncode=EXIT_ERROR)


def _certificates(certs: list[Certificate]) -> Outcome:
    payload: Any = certs[0].to_dict() if len(certs) == 1 else [c.to_dict() for c in certs]
    return Outcome(payload, "\n".join(c.summary() for c in certs), certs)


def classify_command(options: dict[str, Any]) -> Outcome:
    d, subset = _case(options)
    result = classify(d, subset=subset)
    return Outcome(result.to_dict(), f"{d}, I = {{{', '.join(d.format_subset(subset))}}}: {result.verdict.value} ({result.rule})")


def scan_command(options: dict[str, Any]) -> Outcome:
    d, subset = _case(options)
    cert = direct_commutativity_scan(d, subset, bound=options.get("max_length"), threads=options.get("threads"))
    return _certificates([cert])


def cosets_command(options: dict[str, Any]) -> Outcome:
    d, subset = _case(options)
    records = CoxeterGroup(d).double_cosets(subset, options.get("max_length"))
    rows = [
        {
            "min_rep": str(r.min_rep),
            "length": r.min_rep.length,
            "stabilizer_subset": d.format_subset(r.stabilizer_subset),
            "coset_size": r.coset_size,
            "left_quotient_size": r.left_quotient_size,
            "involution": r.involution,
        }
        for r in records
    ]
    text = "\n".join(
        f"{row['min_rep']:<30} len={row['length']:<3} |W_I/W_K|={row['left_quotient_size']:<8} involution={row['involution']}"
        for row in rows
    )
    return Outcome(rows, text)


def poincare_command(options: dict[str, Any]) -> Outcome:
    d = _diagram(options)
    labels = _labels(options.get("subset"))
    subset = d.subset(labels) if labels is not None else frozenset(d.nodes)
    params = ParamRing(d)
    text = format_polynomial(poincare_polynomial(d, subset), params.names)
    payload = {
        "diagram": d.name or d.to_spec(),
        "subset": d.format_subset(subset),
        "polynomial": text,
        "variables": params.class_labels,
    }
    return Outcome(payload, text)


def certify_command(options: dict[str, Any]) -> Outcome:
    d, subset = _case(options)
    method = options["method"]
    if method in (Method.PROP27, Method.STAR):
        _require(options, "i", "k")
    limits = {"max_classes": options.get("max_classes"), "max_steps": None}
    if method == Method.COR26:
        cert = verify_cor26(d, subset, options["u"] or "", options["z"] or "", options["v"] or "", guard=options.get("guard"))
    elif method == Method.PROP27:
        cert = verify_prop27(d, subset, options["u"] or "", options["w_I"] or "", options["i"], options["k"], **limits)
    elif method == Method.STAR:
        if options.get("at_least") is None:
            raise CommandError("--at-least is required for the pattern predicate", returncode=EXIT_ERROR)
        cert = verify_star(d, subset, options["u"] or "", options["w_I"] or "", options["i"], options["k"], options["at_least"], **limits)
    elif method == Method.CLAIM1:
        cert = claim1_witness(d, subset, guard=options.get("guard"))
    else:
        cert = opposition_commutativity(d, subset, bound=options.get("max_length"))
    return _certificates([cert])


def verify_table_command(options: dict[str, Any]) -> Outcome:
    rows = load_table(options.get("table"))
    limits = {"guard": options.get("guard"), "max_classes": options.get("max_classes"), "max_steps": None}
    if options.get("row"):
        row = find_row(rows, options["row"])
        params = parse_params(options.get("params"))
        if params or not row.parametrized:
            certs = [verify_table_row(row, params or None, **limits)]
        else:
            certs = verify_table([row], options.get("max_rank"), options.get("threads"), **limits)
    else:
        certs = verify_table(rows, options.get("max_rank"), options.get("threads"), **limits)
    return _certificates(certs)


def involutions_command(options: dict[str, Any]) -> Outcome:
    d = _diagram(options)
    removed = _labels(options.get("remove")) or []
    if len(removed) != 1:
        raise CommandError("involutions needs exactly one --remove node", returncode=EXIT_ERROR)
    report = involution_report(d, removed[0])
    text = (
        f"{report.count} double cosets, sizes {', '.join(map(str, report.quotient_sizes))} "
        f"(total {report.total}), all involutions: {report.all_involutions}"
    )
    return Outcome(report.to_dict(), text)


def lift_command(options: dict[str, Any]) -> Outcome:
    if not options.get("target"):
        raise CommandError("--target is required", returncode=EXIT_ERROR)
    limits = {"guard": options.get("guard"), "max_classes": options.get("max_classes")}
    if options.get("row"):
        row = find_row(load_table(options.get("table")), options["row"])
        source: Any = row.instantiate(parse_params(options.get("params")) or None)
    else:
        d = _diagram(options)
        source = ExplicitWitness(
            d, tuple(_labels(options.get("remove")) or ()), options["u"] or "", options["z"] or "", options["v"] or ""
        )
    return _certificates([lift_witness(source, options["target"], **limits)])


HELP = {
    "classify": "known commutativity answer for I",
    "scan": "compare T_u^I T_v^I with T_v^I T_u^I over representatives",
    "cosets": "double coset representatives of W_I",
    "poincare": "Poincare polynomial of W_J",
    "certify": "certify an explicit witness",
    "verify-table": "verify rows of the witness table",
    "involutions": "double coset statistics and involution check",
    "lift": "re-run a witness in a diagram with larger bonds",
}

COMMANDS: dict[str, Callable[[dict[str, Any]], Outcome]] = {
    "classify": classify_command,
    "scan": scan_command,
    "cosets": cosets_command,
    "poincare": poincare_command,
    "certify": certify_command,
    "verify-table": verify_table_command,
    "involutions": involutions_command,
    "lift": lift_command,
}


def add_arguments(parser: CommandParser) -> None:
    subparsers = parser.add_subparsers(dest="subcommand", required=True)
    for name in COMMANDS:
        sub = subparsers.add_parser(name, help=HELP[name])
        sub.add_argument("--diagram", help='Diagram name, e.g. "E6" or "D5^{3}"')
        sub.add_argument("--remove", help="Comma separated labels outside I")
        sub.add_argument("--subset", help="Comma separated labels of I")
        sub.add_argument("--format", choices=["json", "text"], default="json")
        sub.add_argument("--threads", type=int, default=None)
        sub.add_argument("--max-length", type=int, default=None, dest="max_length")
        sub.add_argument("--max-classes", type=int, default=None, dest="max_classes")
        sub.add_argument("--guard", type=int, default=None)
        sub.add_argument("--table", default=None, help="Witness table file")
        sub.add_argument("--save", action="store_true", help="Store certificates in the database")
        if name in ("verify-table", "lift"):
            sub.add_argument("--row")
            sub.add_argument("--params", help='Family parameters, e.g. "n=7,i=5"')
            sub.add_argument("--max-rank", type=int, default=None, dest="max_rank")
        if name in ("certify", "lift"):
            sub.add_argument("--u-word", dest="u", help="Word for u")
            sub.add_argument("--z-word", dest="z", help="Word for z, inside W_I")
            sub.add_argument("--v-word", dest="v", help="Word for v")
        if name == "certify":
            sub.add_argument(
                "--method",
                choices=[m.value for m in (Method.COR26, Method.PROP27, Method.STAR, Method.CLAIM1, Method.AUTOMORPHISM)],
                default=Method.COR26.value,
            )
            sub.add_argument("--w-I", dest="w_I")
            sub.add_argument("--i")
            sub.add_argument("--k")
            sub.add_argument("--at-least", type=int, dest="at_least")
        if name == "lift":
            sub.add_argument("--target", help="Diagram with bonds at least the source bonds")


def render(outcome: Outcome, output_format: str) -> str:
    if output_format == "text":
        return outcome.text
    return json.dumps(outcome.payload, sort_keys=True, indent=2, ensure_ascii=False)


def execute(options: dict[str, Any]) -> tuple[str, int]:
    """Run one subcommand; returns the rendered output and the exit code."""
    try:
        outcome = COMMANDS[options["subcommand"]](options)
    except HeckeError as e:
        raise CommandError(f"{e.code}: {e.message}", returncode=EXIT_ERROR) from None
    if options.get("save"):
        from commute.models import save_certificate

        for cert in outcome.certificates:
            save_certificate(cert)
        logger.info(f"Saved {len(outcome.certificates)} certificate(s)")
    code = EXIT_INCONCLUSIVE if outcome.inconclusive else EXIT_OK
    return render(outcome, options.get("format") or "json"), code


def run(argv: Sequence[str] | None = None) -> int:
    """Console entry point: ``hecke classify --diagram E6 --remove 2``.

    The command runs through ``call_command``, so argument errors arrive as
    ``CommandError`` with EXIT_ERROR and 2 is left for inconclusive verdicts.
    """
    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "backend.settings")
    import django
    from django.apps import apps
    from django.core.management import call_command

    if not apps.ready:
        django.setup()
    args = list(sys.argv[1:] if argv is None else argv)
    try:
        call_command("hecke", *args)
    except CommandError as exc:
        sys.stderr.write(f"{exc}\n")
        return exc.returncode
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_ERROR
    return EXIT_OK
