from itertools import product

from django.test import SimpleTestCase, tag

from core.exceptions import ContextMismatchError, GuardExceededError, NonSphericalError
from coxeter.diagram import parse_diagram
from coxeter.group import CoxeterGroup


def _permutation(word: tuple[int, ...], size: int) -> tuple[int, ...]:
    """Right action of adjacent transpositions (labels 1..size-1) on positions."""
    p = tuple(range(size))
    for s in word:
        swapped = list(p)
        swapped[s - 1], swapped[s] = swapped[s], swapped[s - 1]
        p = tuple(swapped)
    return p


class NormalFormTests(SimpleTestCase):
    def setUp(self) -> None:
        self.a2 = CoxeterGroup(parse_diagram("A2"))

    def test_braid_relation(self) -> None:
        first, reduced = self.a2.normal_form("121")
        self.assertTrue(reduced)
        self.assertEqual(first, self.a2("212"))
        self.assertEqual(str(first), "1 2 1")

    def test_cancellation(self) -> None:
        element, reduced = self.a2.normal_form("11")
        self.assertFalse(reduced)
        self.assertTrue(element.is_identity)
        self.assertEqual(str(element), "e")

    def test_shortlex_prefers_small_letters(self) -> None:
        a3 = CoxeterGroup(parse_diagram("A3"))
        self.assertEqual(str(a3("2312")), "2 1 3 2")
        self.assertEqual(str(a3("31")), "1 3")

    def test_inverse_and_descents(self) -> None:
        g = self.a2("12")
        self.assertEqual(self.a2.inverse(g), self.a2("21"))
        self.assertEqual(self.a2.descent_set(g), frozenset({self.a2.nodes[1]}))
        self.assertEqual(self.a2.descent_set(g, side="left"), frozenset({self.a2.nodes[0]}))

    def test_elements_from_other_groups_are_rejected(self) -> None:
        other = CoxeterGroup(parse_diagram("B2"))
        with self.assertRaises(ContextMismatchError):
            self.a2.multiply(self.a2("1"), other("1"))


class EnumerationTests(SimpleTestCase):
    def test_group_orders(self) -> None:
        expected = {"A3": 24, "B3": 48, "D4": 192, "H3": 120, "I2(5)": 10, "G2": 12}
        for name, order in expected.items():
            with self.subTest(name=name):
                self.assertEqual(len(CoxeterGroup(parse_diagram(name)).enumerate_coxeter()), order)

    def test_longest_element_lengths(self) -> None:
        expected = {"A3": 6, "B3": 9, "H3": 15, "F4": 24, "E6": 36, "H4": 60}
        for name, length in expected.items():
            with self.subTest(name=name):
                w0, _ = CoxeterGroup(parse_diagram(name)).longest_element()
                self.assertEqual(w0.length, length)

    def test_opposition_involution(self) -> None:
        group = CoxeterGroup(parse_diagram("A3"))
        _, opposition = group.longest_element()
        self.assertEqual({s.label: t.label for s, t in opposition.items()}, {1: 3, 2: 2, 3: 1})

        group = CoxeterGroup(parse_diagram("D5"))
        _, opposition = group.longest_element()
        self.assertEqual(opposition[group.diagram.node("4")], group.diagram.node("5"))

    def test_infinite_group_needs_bound(self) -> None:
        group = CoxeterGroup(parse_diagram("~A2"))
        with self.assertRaises(NonSphericalError):
            group.enumerate_coxeter()
        # 1 + 3 + 6 + 9 elements up to length 3.
        self.assertEqual(len(group.enumerate_coxeter(bound=3)), 19)

    def test_multiplication_agrees_with_permutations(self) -> None:
        group = CoxeterGroup(parse_diagram("A3"))
        elements = group.enumerate_coxeter()

        def labels(g) -> tuple[int, ...]:
            return tuple(s.label for s in g.word)

        images = {_permutation(labels(g), 4) for g in elements}
        self.assertEqual(len(images), 24)
        for a, b in product(elements, repeat=2):
            self.assertEqual(
                _permutation(labels(group.multiply(a, b)), 4),
                _permutation(labels(a) + labels(b), 4),
            )

    def test_cyclotomic_representation_for_h3(self) -> None:
        group = CoxeterGroup(parse_diagram("H3"), integral=False)
        self.assertEqual(len(group.enumerate_coxeter()), 120)
        element, reduced = group.normal_form("2323232323")
        self.assertFalse(reduced)
        self.assertTrue(element.is_identity)

    def test_minimal_coset_representatives(self) -> None:
        group = CoxeterGroup(parse_diagram("A3"))
        ids = group.enumerate_ids(range(3), avoid_right=(0, 1))
        self.assertEqual([str(g) for g in group.sorted_elements(ids)], ["e", "3", "2 3", "1 2 3"])

    def test_quotient_sizes(self) -> None:
        for name in ("A3", "B3", "H3", "F4"):
            group = CoxeterGroup(parse_diagram(name))
            order = len(group.enumerate_ids(range(group.rank)))
            for removed in range(group.rank):
                subset = tuple(s for s in range(group.rank) if s != removed)
                with self.subTest(name=name, removed=removed):
                    minimal = group.enumerate_ids(range(group.rank), avoid_right=subset)
                    self.assertEqual(len(minimal) * len(group.enumerate_ids(subset)), order)
                    self.assertFalse(
                        any(group.is_right_descent(x, s) for x in minimal for s in subset)
                    )


class BruhatTests(SimpleTestCase):
    def setUp(self) -> None:
        self.group = CoxeterGroup(parse_diagram("A2"))

    def test_order(self) -> None:
        g = self.group
        self.assertTrue(g.bruhat_leq(g.identity, g("1")))
        self.assertTrue(g.bruhat_leq(g("1"), g("12")))
        self.assertTrue(g.bruhat_leq(g("2"), g("121")))
        self.assertFalse(g.bruhat_leq(g("1"), g("2")))
        self.assertFalse(g.bruhat_leq(g("21"), g("12")))

    def test_lower_set(self) -> None:
        g = self.group
        self.assertEqual(len(g.bruhat_lower_set(g("121"), guard=10)), 6)
        self.assertEqual(g.bruhat_lower_set(g("12"), guard=10), {g.identity, g("1"), g("2"), g("12")})

    def test_guard(self) -> None:
        with self.assertRaises(GuardExceededError):
            self.group.bruhat_lower_set(self.group("121"), guard=2)

    def test_lower_set_matches_order(self) -> None:
        group = CoxeterGroup(parse_diagram("B3"))
        elements = group.enumerate_coxeter()
        top = group("123123")
        lower = group.bruhat_lower_set(top, guard=100)
        self.assertEqual(lower, {x for x in elements if group.bruhat_leq(x, top)})


class DoubleCosetTests(SimpleTestCase):
    def test_a2(self) -> None:
        d = parse_diagram("A2")
        records = CoxeterGroup(d).double_cosets(d.subset(["2"]))
        self.assertEqual([str(r.min_rep) for r in records], ["e", "1"])
        self.assertEqual([r.left_quotient_size for r in records], [1, 2])

    def test_a3_middle_node(self) -> None:
        d = parse_diagram("A3")
        records = CoxeterGroup(d).double_cosets(d.complement(["2"]))
        self.assertEqual([str(r.min_rep) for r in records], ["e", "2", "2 1 3 2"])
        self.assertEqual([r.left_quotient_size for r in records], [1, 4, 1])
        self.assertEqual([r.coset_size for r in records], [4, 16, 4])
        self.assertEqual(records[1].stabilizer_subset, frozenset())
        self.assertEqual(records[2].stabilizer_subset, d.complement(["2"]))
        self.assertTrue(all(r.involution for r in records))

    def test_sizes_add_up(self) -> None:
        for name, removed in (("B3", "2"), ("D4", "2"), ("H3", "1"), ("F4", "3")):
            with self.subTest(name=name):
                d = parse_diagram(name)
                group = CoxeterGroup(d)
                subset = d.complement([removed])
                records = group.double_cosets(subset)
                total = len(group.enumerate_coxeter())
                self.assertEqual(sum(r.coset_size for r in records), total)

    def test_infinite_group_needs_bound(self) -> None:
        d = parse_diagram("~A2")
        group = CoxeterGroup(d)
        with self.assertRaises(NonSphericalError):
            group.double_cosets(d.complement(["0"]))
        bounded = group.double_cosets(d.complement(["0"]), bound=4)
        self.assertEqual(str(bounded[0].min_rep), "e")
        self.assertEqual(str(bounded[1].min_rep), "0")

    def test_non_spherical_subset(self) -> None:
        d = parse_diagram("~A2")
        with self.assertRaises(NonSphericalError):
            CoxeterGroup(d).double_cosets(d.nodes, bound=3)

    @tag("slow")
    def test_e8_statistics(self) -> None:
        d = parse_diagram("E8")
        group = CoxeterGroup(d)
        records = group.double_cosets(d.complement(["1"]))
        self.assertEqual(len(records), 10)
        self.assertEqual(sum(r.left_quotient_size for r in records), 2160)
        by_length = {r.min_rep.length: r for r in records}
        self.assertEqual(
            sorted(r.left_quotient_size for r in records), [1, 1, 14, 64, 64, 280, 280, 448, 448, 560]
        )
        self.assertTrue(all(r.involution for r in records))
        self.assertEqual(by_length[0].min_rep, group.identity)
        self.assertEqual(by_length[1].min_rep, group("1"))
        self.assertEqual(by_length[8].min_rep, group("13425431"))
        self.assertEqual(by_length[17].min_rep, group("13425463576452431"))
