from django.test import SimpleTestCase, tag

from core.exceptions import MalformedWitnessError
from coxeter.diagram import parse_diagram
from commute.certificates import Certificate, Method, Verdict
from commute.table import find_row, load_table
from commute.verifiers import side_bound, verify_cor26, verify_prop27, verify_table, verify_table_row


class DecompositionSearchTests(SimpleTestCase):
    def test_noncommutative_witness(self) -> None:
        d = parse_diagram("A2")
        cert = verify_cor26(d, frozenset(), "1", "", "2")
        self.assertEqual(cert.verdict, Verdict.NONCOMMUTATIVE)
        self.assertEqual(cert.method, Method.COR26)
        self.assertIsNone(cert.evidence["decomposition"])
        self.assertEqual(cert.evidence["w"], "1 2")

    def test_decomposition_found(self) -> None:
        d = parse_diagram("B2")
        cert = verify_cor26(d, d.subset(["2"]), "1", "2", "1")
        self.assertEqual(cert.verdict, Verdict.INCONCLUSIVE)
        self.assertEqual(cert.evidence["decomposition"], {"v'": "1", "z'": "2", "u'": "1"})

    def test_a3_middle_node(self) -> None:
        d = parse_diagram("A3")
        cert = verify_cor26(d, d.subset(["2"]), "1", "2", "3")
        self.assertEqual(cert.verdict, Verdict.NONCOMMUTATIVE)

    def test_malformed_witnesses(self) -> None:
        d = parse_diagram("A2")
        cases = [
            ("1", "2", "1"),  # w = 121 is not I-reduced
            ("", "1", ""),  # z leaves W_I
            ("12", "", "21"),  # not reduced
        ]
        for u, z, v in cases:
            with self.subTest(u=u, z=z, v=v), self.assertRaises(MalformedWitnessError):
                verify_cor26(d, d.subset(["2"]), u, z, v)

    def test_descents_of_u_and_v_in_w_i_move_into_z(self) -> None:
        d = parse_diagram("A3")
        cert = verify_cor26(d, d.subset(["1", "3"]), "21", "3", "2")
        parts = cert.evidence["reduced_parts"]
        self.assertEqual((parts["u"], parts["v"]), ("2", "2"))
        self.assertEqual(sorted(parts["z"].split()), ["1", "3"])
        self.assertEqual(cert.verdict, Verdict.INCONCLUSIVE)
        found = cert.evidence["decomposition"]
        self.assertEqual((found["v'"], found["u'"]), ("2", "2"))
        self.assertEqual(sorted(found["z'"].split()), ["1", "3"])

    def test_reduced_parts_absent_for_i_reduced_u_and_v(self) -> None:
        d = parse_diagram("A3")
        cert = verify_cor26(d, d.subset(["2"]), "1", "2", "3")
        self.assertNotIn("reduced_parts", cert.evidence)

    def test_guard_gives_inconclusive(self) -> None:
        d = parse_diagram("A3")
        cert = verify_cor26(d, d.subset(["2"]), "1", "2", "3", guard=1)
        self.assertEqual(cert.verdict, Verdict.INCONCLUSIVE)
        self.assertEqual(cert.evidence["reason"], "guard_exceeded")


class HeapCertificateTests(SimpleTestCase):
    def setUp(self) -> None:
        self.rows = load_table()

    def test_f4(self) -> None:
        cert = verify_table_row(find_row(self.rows, "F_{4,2}"))
        self.assertEqual(cert.verdict, Verdict.NONCOMMUTATIVE)
        self.assertEqual(cert.method, Method.PROP27)
        self.assertTrue(cert.evidence["condition_1"])
        self.assertTrue(cert.evidence["condition_2"])

    def test_d5_attachment_has_one_class(self) -> None:
        cert = verify_table_row(find_row(self.rows, "D_5^3"))
        self.assertEqual(cert.verdict, Verdict.NONCOMMUTATIVE)
        self.assertEqual(cert.evidence["class_count"], 1)

    def test_h4_first_two_pattern(self) -> None:
        cert = verify_table_row(find_row(self.rows, "H_{4,4}"))
        self.assertEqual(cert.verdict, Verdict.NONCOMMUTATIVE)
        self.assertEqual(cert.method, Method.STAR)
        self.assertEqual(cert.evidence["class_count"], 2)
        self.assertIn("cor26", cert.evidence)

    def test_b2_last_two_pattern(self) -> None:
        cert = verify_table_row(find_row(self.rows, "B_2^{1,2}"))
        self.assertEqual(cert.verdict, Verdict.NONCOMMUTATIVE)
        self.assertEqual(cert.evidence["class_count"], 1)
        self.assertEqual(cert.evidence["cor26"]["verdict"], Verdict.NONCOMMUTATIVE.value)
        self.assertTrue(cert.evidence["bound_holds"])

    def test_dihedral_attachment_forced_counts(self) -> None:
        cert = verify_table_row(find_row(self.rows, "I_2(7)^1"))
        self.assertEqual(cert.verdict, Verdict.NONCOMMUTATIVE)
        self.assertTrue(all(count >= 3 for count in cert.evidence["forced_counts"]))

    def test_attachment_rows_with_w_i_descents_in_u(self) -> None:
        for row_id in ["D_5^3", "D_6^3", "I_2(7)^1"]:
            with self.subTest(row=row_id):
                cert = verify_table_row(find_row(self.rows, row_id))
                self.assertEqual(cert.verdict, Verdict.NONCOMMUTATIVE)

    def test_parametrized_instance(self) -> None:
        cert = verify_table_row(find_row(self.rows, "D_{n,i}"), {"n": 7, "i": 5})
        self.assertEqual(cert.case, "D_{7,5}")
        self.assertEqual(cert.verdict, Verdict.NONCOMMUTATIVE)
        self.assertEqual(cert.evidence["params"], {"n": 7, "i": 5})

    def test_wrong_k_is_inconclusive(self) -> None:
        d = parse_diagram("F4")
        cert = verify_prop27(d, d.complement(["2"]), "232", "431", "2", "4")
        self.assertEqual(cert.verdict, Verdict.INCONCLUSIVE)
        self.assertFalse(cert.evidence["condition_2"])

    def test_class_limit_gives_inconclusive(self) -> None:
        cert = verify_table_row(find_row(self.rows, "H_{4,4}"), max_classes=1)
        self.assertEqual(cert.verdict, Verdict.INCONCLUSIVE)
        self.assertEqual(cert.evidence["reason"], "limit_exceeded")

    def test_certificate_survives_json(self) -> None:
        cert = verify_table_row(find_row(self.rows, "H_{3,2}"))
        self.assertEqual(Certificate.from_json(cert.to_json()), cert)


class SideBoundTests(SimpleTestCase):
    def test_bound_from_u(self) -> None:
        d = parse_diagram("B2^{1,2}")
        zero, two = d.node("0"), d.node("2")
        u = d.parse_word("01210")
        self.assertEqual(side_bound(u, zero, two, 3), 1)
        self.assertIsNone(side_bound(u, zero, two, 2))


@tag("slow")
class TableTests(SimpleTestCase):
    def test_every_row_up_to_rank_six(self) -> None:
        certs = verify_table(load_table(), max_rank=6, threads=2)
        undecided = [c.case for c in certs if c.verdict != Verdict.NONCOMMUTATIVE]
        self.assertEqual(undecided, [])

    def test_affine_e8_has_three_classes(self) -> None:
        cert = verify_table_row(find_row(load_table(), "~E_{8,1}"))
        self.assertEqual(cert.verdict, Verdict.NONCOMMUTATIVE)
        self.assertEqual(cert.evidence["class_count"], 3)

    def test_rows_with_w_i_descents_in_u(self) -> None:
        rows = load_table()
        for row_id in ["D_7^3", "E_7^2", "E_{8,2}", "~E_{8,1}"]:
            with self.subTest(row=row_id):
                cert = verify_table_row(find_row(rows, row_id))
                self.assertEqual(cert.verdict, Verdict.NONCOMMUTATIVE)
                self.assertTrue(cert.evidence["condition_1"])
                self.assertTrue(cert.evidence["condition_2"])

    def test_corrected_e7_row_has_one_class(self) -> None:
        cert = verify_table_row(find_row(load_table(), "E_7^2"))
        self.assertEqual(cert.evidence["class_count"], 1)
