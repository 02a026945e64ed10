from django.test import SimpleTestCase

from core.exceptions import DiagramParseError, DominanceError, NonSphericalError
from coxeter.diagram import parse_diagram
from commute.certificates import Method, Verdict
from commute.table import find_row, load_table
from commute.witnesses import (
    ExplicitWitness,
    claim1_witness,
    connecting_path,
    involution_report,
    lift_witness,
    opposition_commutativity,
)


class ConnectingPathTests(SimpleTestCase):
    def test_paths(self) -> None:
        cases = [
            ("A3", ["2"], "1 2 3"),
            ("A2", [], "1 2"),
            ("D4", ["2", "4"], "1 2 3"),
        ]
        for name, subset, expected in cases:
            d = parse_diagram(name)
            with self.subTest(diagram=name, subset=subset):
                self.assertEqual(d.format_word(connecting_path(d, d.subset(subset))), expected)

    def test_needs_two_removed_nodes(self) -> None:
        d = parse_diagram("A3")
        with self.assertRaises(DiagramParseError):
            connecting_path(d, d.complement(["2"]))

    def test_needs_connected_diagram(self) -> None:
        d = parse_diagram("A1 x A1")
        with self.assertRaises(DiagramParseError):
            connecting_path(d, frozenset())

    def test_claim1_certificate(self) -> None:
        d = parse_diagram("A3")
        cert = claim1_witness(d, d.subset(["2"]))
        self.assertEqual(cert.method, Method.CLAIM1)
        self.assertEqual(cert.verdict, Verdict.NONCOMMUTATIVE)
        self.assertEqual(cert.evidence["path"], "1 2 3")


class InvolutionReportTests(SimpleTestCase):
    def test_a2(self) -> None:
        report = involution_report(parse_diagram("A2"), "1")
        self.assertEqual(report.count, 2)
        self.assertEqual(report.representatives, ["e", "1"])
        self.assertEqual(report.quotient_sizes, [1, 2])
        self.assertEqual(report.total, 3)
        self.assertTrue(report.all_involutions)
        self.assertEqual((report.longest_length, report.longest_I_length), (3, 1))

    def test_d4_branch_node(self) -> None:
        report = involution_report(parse_diagram("D4"), "2")
        self.assertEqual(report.total, 192 // 8)
        self.assertEqual((report.longest_length, report.longest_I_length), (12, 3))
        self.assertEqual(report.representatives[0], "e")

    def test_infinite_group(self) -> None:
        with self.assertRaises(NonSphericalError):
            involution_report(parse_diagram("~A2"), "0")


class OppositionTests(SimpleTestCase):
    def test_identity_inverts_a3_representatives(self) -> None:
        d = parse_diagram("A3")
        cert = opposition_commutativity(d, d.complement(["2"]))
        self.assertEqual(cert.method, Method.AUTOMORPHISM)
        self.assertEqual(cert.verdict, Verdict.COMMUTATIVE)
        self.assertEqual(cert.evidence["automorphism"], {"1": "1", "2": "2", "3": "3"})
        self.assertEqual(cert.evidence["checked"], 3)

    def test_affine_bound(self) -> None:
        d = parse_diagram("~A2")
        cert = opposition_commutativity(d, d.complement(["0"]), bound=6)
        self.assertEqual(cert.verdict, Verdict.COMMUTATIVE_UP_TO_BOUND)
        self.assertEqual(cert.evidence["bound"], 6)

    def test_noncommutative_case_is_inconclusive(self) -> None:
        d = parse_diagram("D5")
        cert = opposition_commutativity(d, d.complement(["3"]))
        self.assertEqual(cert.verdict, Verdict.INCONCLUSIVE)
        self.assertTrue(cert.evidence["rejected"])


class LiftTests(SimpleTestCase):
    def setUp(self) -> None:
        self.rows = load_table()

    def test_raised_bond(self) -> None:
        cert = lift_witness(find_row(self.rows, "A_2^{1,1,2}"), "B2^{1,1,2}")
        self.assertEqual(cert.method, Method.LIFT)
        self.assertEqual(cert.verdict, Verdict.NONCOMMUTATIVE)
        self.assertEqual(cert.evidence["raised"], [{"pair": ["1", "2"], "from": 3, "to": 4}])
        self.assertEqual(cert.evidence["embedded"]["verdict"], Verdict.NONCOMMUTATIVE.value)

    def test_identity_lift(self) -> None:
        cert = lift_witness(find_row(self.rows, "F_{4,2}"), "F4")
        self.assertEqual(cert.verdict, Verdict.NONCOMMUTATIVE)
        self.assertEqual(cert.evidence["raised"], [])

    def test_explicit_witness(self) -> None:
        witness = ExplicitWitness(parse_diagram("A3"), ("1", "3"), "1", "2", "3")
        cert = lift_witness(witness, "B3")
        self.assertEqual(cert.verdict, Verdict.NONCOMMUTATIVE)
        self.assertEqual(cert.case, "A3 -> B3")

    def test_decreasing_bond(self) -> None:
        with self.assertRaises(DominanceError):
            lift_witness(find_row(self.rows, "B_2^{1,1,1}"), "A2^{1,1,1}")

    def test_different_nodes(self) -> None:
        with self.assertRaises(DominanceError):
            lift_witness(find_row(self.rows, "F_{4,2}"), "B3")
