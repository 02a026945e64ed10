from django.test import SimpleTestCase

from core.exceptions import HeckeError, NonSphericalError
from commute.certificates import Verdict
from commute.classification import (
    AFFINE_SPECIAL,
    INFINITE_NON_AFFINE,
    PRODUCT,
    SEVERAL_REMOVED,
    SPHERICAL_LIST,
    classify,
)

COMMUTATIVE = Verdict.COMMUTATIVE
NONCOMMUTATIVE = Verdict.NONCOMMUTATIVE


class SphericalTests(SimpleTestCase):
    def test_known_cases(self) -> None:
        cases = [
            ("A5", "3", COMMUTATIVE),
            ("B4", "2", COMMUTATIVE),
            ("I2(9)", "1", COMMUTATIVE),
            ("E6", "2", COMMUTATIVE),
            ("E6", "3", NONCOMMUTATIVE),
            ("D7", "3", COMMUTATIVE),
            ("D7", "5", NONCOMMUTATIVE),
            ("D7", "6", COMMUTATIVE),
            ("D7", "7", COMMUTATIVE),
            ("F4", "1", COMMUTATIVE),
            ("F4", "2", NONCOMMUTATIVE),
            ("H4", "1", COMMUTATIVE),
            ("H4", "4", NONCOMMUTATIVE),
            ("H3", "3", COMMUTATIVE),
            ("H3", "2", NONCOMMUTATIVE),
        ]
        for name, removed, verdict in cases:
            with self.subTest(diagram=name, removed=removed):
                result = classify(name, removed=[removed])
                self.assertEqual(result.verdict, verdict)
                self.assertEqual(result.rule, SPHERICAL_LIST)
                self.assertFalse(result.theorem_level)

    def test_provenance(self) -> None:
        result = classify("E6", removed=["2"])
        self.assertEqual(result.provenance, {"type": "E6", "i": 2})
        self.assertTrue(result.commutative)


class AffineTests(SimpleTestCase):
    def test_special_vertex_rule(self) -> None:
        cases = [
            ("~F4", "4", NONCOMMUTATIVE),
            ("~F4", "0", COMMUTATIVE),
            ("~A3", "2", COMMUTATIVE),
            ("~C3", "3", COMMUTATIVE),
            ("~C3", "1", NONCOMMUTATIVE),
            ("~G2", "0", COMMUTATIVE),
            ("~G2", "1", NONCOMMUTATIVE),
            ("~E6", "6", COMMUTATIVE),
            ("~E8", "8", NONCOMMUTATIVE),
        ]
        for name, removed, verdict in cases:
            with self.subTest(diagram=name, removed=removed):
                result = classify(name, removed=[removed])
                self.assertEqual(result.verdict, verdict)
                self.assertEqual(result.rule, AFFINE_SPECIAL)


class OtherRuleTests(SimpleTestCase):
    def test_several_removed(self) -> None:
        result = classify("A3", removed=["1", "3"])
        self.assertEqual(result.verdict, NONCOMMUTATIVE)
        self.assertEqual(result.rule, SEVERAL_REMOVED)

    def test_product(self) -> None:
        result = classify("A2 x A1", removed=["1"])
        self.assertEqual(result.verdict, COMMUTATIVE)
        self.assertEqual(result.rule, PRODUCT)
        self.assertEqual(len(result.provenance["components"]), 2)

    def test_product_with_noncommutative_factor(self) -> None:
        result = classify("H3 x A2", removed=["2", "1'"])
        self.assertEqual(result.verdict, NONCOMMUTATIVE)
        self.assertEqual(result.rule, PRODUCT)

    def test_infinite_non_affine(self) -> None:
        result = classify("D5^{3}", removed=["0"])
        self.assertEqual(result.verdict, NONCOMMUTATIVE)
        self.assertEqual(result.rule, INFINITE_NON_AFFINE)
        self.assertTrue(result.theorem_level)

    def test_subset_form(self) -> None:
        self.assertEqual(classify("E6", subset=["1", "3", "4", "5", "6"]).verdict, COMMUTATIVE)

    def test_invalid_requests(self) -> None:
        with self.assertRaises(NonSphericalError):
            classify("~A2", removed=[])
        with self.assertRaises(HeckeError):
            classify("A3", removed=["1"], subset=["2"])
        with self.assertRaises(HeckeError):
            classify("A3")
