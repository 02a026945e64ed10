from django.test import SimpleTestCase, tag

from coxeter.diagram import parse_diagram
from commute.certificates import Method, Verdict
from commute.classification import classify
from commute.scan import direct_commutativity_scan


class DirectScanTests(SimpleTestCase):
    def test_commutative_dihedral(self) -> None:
        d = parse_diagram("A2")
        cert = direct_commutativity_scan(d, d.subset(["2"]), threads=1)
        self.assertEqual(cert.method, Method.DIRECT)
        self.assertEqual(cert.verdict, Verdict.COMMUTATIVE)
        self.assertIsNone(cert.evidence["witness"])
        self.assertIsNone(cert.evidence["bound"])
        self.assertEqual(cert.evidence["representatives"], ["e", "1"])

    def test_noncommutative_h3(self) -> None:
        d = parse_diagram("H3")
        cert = direct_commutativity_scan(d, d.complement(["2"]), threads=1)
        self.assertEqual(cert.verdict, Verdict.NONCOMMUTATIVE)
        witness = cert.evidence["witness"]
        self.assertNotEqual(witness["c_uv"], witness["c_vu"])
        self.assertEqual(witness["tau"], 2)

    def test_b3_every_node(self) -> None:
        d = parse_diagram("B3")
        for s in d.nodes:
            with self.subTest(removed=s.display):
                cert = direct_commutativity_scan(d, d.complement([s]), threads=1)
                self.assertEqual(cert.verdict, Verdict.COMMUTATIVE)

    def test_d4_end_node(self) -> None:
        d = parse_diagram("D4")
        cert = direct_commutativity_scan(d, d.complement(["1"]), threads=2)
        self.assertEqual(cert.verdict, Verdict.COMMUTATIVE)


@tag("slow")
class ScanAgainstClassificationTests(SimpleTestCase):
    def test_f4_witness_values(self) -> None:
        d = parse_diagram("F4")
        cert = direct_commutativity_scan(d, d.complement(["2"]))
        self.assertEqual(cert.verdict, Verdict.NONCOMMUTATIVE)
        self.assertTrue(cert.evidence["witness"]["psi_nonnegative"])

    def test_small_spherical_diagrams(self) -> None:
        for name in ("A3", "A4", "B3", "H3", "D4", "I2(5)"):
            d = parse_diagram(name)
            for s in d.nodes:
                with self.subTest(diagram=name, removed=s.display):
                    expected = classify(d, removed=[s]).verdict
                    self.assertEqual(direct_commutativity_scan(d, d.complement([s])).verdict, expected)

    def test_affine_special_vertices_up_to_bound(self) -> None:
        for name in ("~A2", "~G2"):
            d = parse_diagram(name)
            with self.subTest(diagram=name):
                cert = direct_commutativity_scan(d, d.complement(["0"]), bound=4)
                self.assertEqual(cert.verdict, Verdict.COMMUTATIVE_UP_TO_BOUND)
                self.assertEqual(cert.evidence["bound"], 4)
