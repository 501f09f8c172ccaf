import unittest

from src.errors import InsufficientOrderError, PreconditionError
from src.field import BETA, ZERO
from src.linear_fit import combine, fit_combination
from src.series import polynomial, s_add, s_equal_to_order, s_scale


class TestFitCombination(unittest.TestCase):
    def setUp(self):
        self.b1 = polynomial({0: 1, 1: 1}, 10)
        self.b2 = polynomial({1: 1, 3: BETA}, 10)

    def test_recovers_field_coefficients(self):
        lhs = s_add(s_scale(self.b1, 3), s_scale(self.b2, BETA))
        fit = fit_combination(lhs, [self.b1, self.b2], 5, 10)
        self.assertEqual(fit.coefficients, (3, BETA))
        self.assertEqual(fit.rank, 2)
        self.assertTrue(fit.consistent)
        self.assertTrue(fit.passed)

    def test_inconsistent_system(self):
        fit = fit_combination(polynomial({2: 1}, 10), [self.b1], 5, 10)
        self.assertFalse(fit.consistent)
        self.assertFalse(fit.passed)
        self.assertEqual(fit.check.exponent, 2)

    def test_consistent_fit_can_fail_the_check(self):
        lhs = s_add(self.b1, polynomial({7: 1}, 10))
        fit = fit_combination(lhs, [self.b1], 5, 10)
        self.assertTrue(fit.consistent)
        self.assertFalse(fit.check.equal)
        self.assertEqual(fit.check.exponent, 7)

    def test_dependent_columns_get_zero(self):
        fit = fit_combination(s_scale(self.b1, 2), [self.b1, self.b1], 5, 10)
        self.assertEqual(fit.rank, 1)
        self.assertEqual(fit.coefficients, (2, ZERO))
        self.assertTrue(fit.passed)

    def test_combine(self):
        combo = combine([2, 0], [self.b1, self.b2], 6)
        self.assertEqual(combo.order, 6)
        self.assertTrue(s_equal_to_order(combo, s_scale(self.b1, 2), 6).equal)

    def test_preconditions(self):
        with self.assertRaises(PreconditionError):
            fit_combination(self.b1, [], 5, 10)
        with self.assertRaises(PreconditionError):
            fit_combination(self.b1, [self.b1], 6, 5)
        with self.assertRaises(InsufficientOrderError):
            fit_combination(self.b1, [self.b1], 5, 12)


if __name__ == '__main__':
    unittest.main()
