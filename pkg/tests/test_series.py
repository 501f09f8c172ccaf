import random
import unittest
from fractions import Fraction

from src.errors import InsufficientOrderError, PreconditionError
from src.field import BETA, KElem
from src.series import (Lattice, QSeries, constant, monomial, polynomial, render_series, s_add, s_equal_to_order,
                        s_mul, s_neg, s_nth_root, s_pow, s_scale, s_shift, s_sub, s_substitute, s_truncate,
                        s_unit_inv, zero)

F = Fraction


def random_series(rng: random.Random, den: int, order, leading_one: bool = False, field: bool = False) -> QSeries:
    terms = {}
    for i in range(int(order * den)):
        if rng.random() < 0.5:
            c = F(rng.randint(-4, 4), rng.randint(1, 3))
            terms[F(i, den)] = KElem(c, rng.randint(-2, 2)) if field else c
    if leading_one:
        terms[F(0)] = 1
    return polynomial(terms, order)


def assert_equal_to(test, f, g, order=None):
    order = min(f.order, g.order) if order is None else order
    result = s_equal_to_order(f, g, order)
    test.assertTrue(result.equal, f"differ at q^{result.exponent}: {result.delta}")


class TestConstruction(unittest.TestCase):
    def test_monomial(self):
        m = monomial(F(1, 5), 3, 2)
        self.assertEqual(list(m.terms()), [(F(1, 5), 3)])
        self.assertEqual(m.order, 2)
        self.assertEqual(monomial(4).order, 5)

    def test_lattice_coarsens(self):
        f = QSeries(0, F(1, 2), (1, 0, 1, 0, 1), 3)
        self.assertEqual(f.step, 1)
        self.assertEqual(f.coeffs, (1, 1, 1))

    def test_leading_zeros_are_stripped(self):
        f = QSeries(0, 1, (0, 0, 2, 0, 5, 0), 10)
        self.assertEqual(f.e0, 2)
        self.assertEqual(f.coefficient(4), 5)
        self.assertEqual(f.coefficient(3), 0)
        self.assertEqual(f.coefficient(F(7, 2)), 0)

    def test_zero_series(self):
        z = zero(7)
        self.assertTrue(z.is_zero())
        self.assertEqual(z.e0, 7)
        self.assertEqual(QSeries(0, 1, (0, 0), 5), QSeries(5, 1, (), 5))

    def test_terms_beyond_order_dropped(self):
        f = polynomial({0: 1, 3: 2, 5: 7}, 4)
        self.assertEqual(list(f.terms()), [(0, 1), (3, 2)])

    def test_coefficient_past_order_raises(self):
        with self.assertRaises(InsufficientOrderError):
            constant(1, 3).coefficient(3)

    def test_bad_step(self):
        with self.assertRaises(PreconditionError):
            QSeries(0, 0, (1,), 1)

    def test_lattice_refine(self):
        lat = Lattice(F(1, 5), F(1)).refine(Lattice(F(0), F(1, 2)))
        self.assertEqual(lat, Lattice(F(0), F(1, 10)))
        self.assertTrue(lat.contains(F(3, 10)))
        self.assertFalse(lat.contains(F(1, 20)))


class TestRingOperations(unittest.TestCase):
    def test_add_keeps_min_order(self):
        f = polynomial({0: 1, 1: 1}, 5)
        g = polynomial({F(1, 2): 1}, 3)
        h = s_add(f, g)
        self.assertEqual(h.order, 3)
        self.assertEqual(list(h.terms()), [(0, 1), (F(1, 2), 1), (1, 1)])

    def test_mul_order_rule(self):
        f = polynomial({0: 1, 1: 1}, 5)
        g = polynomial({2: 1}, 4)
        self.assertEqual(s_mul(f, g).order, 4)
        self.assertEqual(s_mul(g, f).order, 4)
        h = polynomial({-1: 1}, 2)
        self.assertEqual(s_mul(f, h).order, 2)

    def test_inverse_geometric(self):
        inv = s_unit_inv(polynomial({0: 1, 1: -1}, 10))
        self.assertEqual(inv.order, 10)
        self.assertEqual([inv.coefficient(i) for i in range(10)], [1] * 10)

    def test_inverse_with_offset(self):
        f = polynomial({2: 2, 3: 2}, 8)
        inv = s_unit_inv(f)
        self.assertEqual(inv.e0, -2)
        self.assertEqual(inv.order, 4)
        assert_equal_to(self, s_mul(f, inv), constant(1, 6))

    def test_inverse_of_empty_series(self):
        with self.assertRaises(PreconditionError):
            s_unit_inv(zero(3))

    def test_ring_axioms_randomized(self):
        rng = random.Random(7)
        for den in (1, 2, 3):
            for _ in range(6):
                f = random_series(rng, den, 6)
                g = random_series(rng, den + 1, 5, field=True)
                h = random_series(rng, 5, 4)
                assert_equal_to(self, s_add(f, g), s_add(g, f))
                assert_equal_to(self, s_mul(f, g), s_mul(g, f))
                assert_equal_to(self, s_mul(s_mul(f, g), h), s_mul(f, s_mul(g, h)))
                left = s_mul(f, s_add(g, h))
                right = s_add(s_mul(f, g), s_mul(f, h))
                assert_equal_to(self, left, right)
                self.assertTrue(s_sub(f, f).is_zero())

    def test_inverse_randomized(self):
        rng = random.Random(11)
        for _ in range(10):
            f = random_series(rng, 3, 6, leading_one=True, field=True)
            assert_equal_to(self, s_mul(f, s_unit_inv(f)), constant(1, 6))

    def test_operators(self):
        f = polynomial({0: 1, 1: 1}, 6)
        self.assertEqual(list((f * 2).terms()), [(0, 2), (1, 2)])
        assert_equal_to(self, f - f, zero(6))
        assert_equal_to(self, (1 / f) * f, constant(1, 6))
        assert_equal_to(self, -f + f, zero(6))
        assert_equal_to(self, f ** 2, polynomial({0: 1, 1: 2, 2: 1}, 6))


class TestPowersAndRoots(unittest.TestCase):
    def test_square_root_squares_back(self):
        f = polynomial({0: 1, 1: 1}, 12)
        r = s_nth_root(f, 2)
        self.assertEqual(r.coefficient(1), F(1, 2))
        self.assertEqual(r.coefficient(2), F(-1, 8))
        assert_equal_to(self, s_mul(r, r), f)

    def test_root_contract_randomized(self):
        rng = random.Random(3)
        for n in (2, 3, 4, 8):
            f = random_series(rng, 2, 5, leading_one=True, field=n == 4)
            r = s_nth_root(f, n)
            assert_equal_to(self, s_pow(r, n), f)

    def test_root_with_offset(self):
        f = polynomial({F(1, 5): 1, F(6, 5): 1}, 6)
        r = s_nth_root(f, 8)
        self.assertEqual(r.e0, F(1, 40))
        self.assertEqual(r.order, F(1, 40) + 6 - F(1, 5))
        assert_equal_to(self, s_pow(r, 8), f)

    def test_fractional_power_needs_unit_lead(self):
        with self.assertRaises(PreconditionError):
            s_pow(polynomial({0: 2, 1: 1}, 4), F(1, 2))

    def test_integer_power_any_lead(self):
        f = polynomial({0: BETA, 1: 1}, 5)
        cube = s_pow(f, 3)
        assert_equal_to(self, cube, s_mul(f, s_mul(f, f)))
        assert_equal_to(self, s_mul(s_pow(f, -1), f), constant(1, 5))

    def test_zero_power(self):
        self.assertEqual(list(s_pow(polynomial({0: 3, 1: 1}, 4), 0).terms()), [(0, 1)])

    def test_bad_root_index(self):
        with self.assertRaises(PreconditionError):
            s_nth_root(constant(1, 3), 0)


class TestSubstitutionAndTruncation(unittest.TestCase):
    def test_substitution_homomorphism(self):
        rng = random.Random(5)
        for _ in range(8):
            f = random_series(rng, 2, 5, leading_one=True)
            g = random_series(rng, 3, 4, leading_one=True)
            for m in (F(1, 5), 2, F(3, 2)):
                assert_equal_to(self, s_substitute(s_mul(f, g), m), s_mul(s_substitute(f, m), s_substitute(g, m)))
                assert_equal_to(self, s_substitute(s_add(f, g), m), s_add(s_substitute(f, m), s_substitute(g, m)))

    def test_substitution_scales_exponents(self):
        f = s_substitute(polynomial({0: 1, 1: -1}, 3), F(1, 5))
        self.assertEqual(list(f.terms()), [(0, 1), (F(1, 5), -1)])
        self.assertEqual(f.order, F(3, 5))
        with self.assertRaises(PreconditionError):
            s_substitute(f, 0)

    def test_truncate_never_raises_order(self):
        f = constant(1, 5)
        self.assertEqual(s_truncate(f, 3).order, 3)
        with self.assertRaises(InsufficientOrderError):
            s_truncate(f, 6)

    def test_shift(self):
        f = s_shift(polynomial({0: 1, 1: 1}, 4), F(-3, 4))
        self.assertEqual(f.e0, F(-3, 4))
        self.assertEqual(f.order, F(13, 4))


class TestEquality(unittest.TestCase):
    def test_first_mismatch(self):
        f = polynomial({0: 1, F(3, 5): 2, 2: 5}, 5)
        g = polynomial({0: 1, F(3, 5): 3, 1: 1}, 5)
        result = s_equal_to_order(f, g, 5)
        self.assertFalse(result)
        self.assertEqual(result.exponent, F(3, 5))
        self.assertEqual(result.delta, KElem(-1))

    def test_equal_below_mismatch(self):
        f = polynomial({0: 1, 3: 2}, 5)
        g = polynomial({0: 1}, 5)
        self.assertTrue(s_equal_to_order(f, g, 3).equal)
        self.assertFalse(s_equal_to_order(f, g, 4).equal)

    def test_compare_past_order_raises(self):
        with self.assertRaises(InsufficientOrderError):
            s_equal_to_order(constant(1, 3), constant(1, 5), 4)

    def test_render(self):
        f = polynomial({0: 1, F(1, 2): -2}, 2)
        self.assertEqual(render_series(f), "1 * q^(0) + -2 * q^(1/2) + O(q^(2))")
        self.assertEqual(render_series(zero(3)), "O(q^(3))")
        self.assertIn("~1.90211", render_series(polynomial({1: BETA}, 2)))

    def test_scale_and_neg(self):
        f = polynomial({0: 1, 1: 2}, 3)
        self.assertTrue(s_scale(f, 0).is_zero())
        self.assertEqual(list(s_neg(f).terms()), [(0, -1), (1, -2)])
        self.assertEqual(list(s_scale(f, BETA).terms()), [(0, BETA), (1, 2 * BETA)])


if __name__ == '__main__':
    unittest.main()
