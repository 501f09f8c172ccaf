import unittest
from fractions import Fraction

import mpmath

from src.cfractions import (CFName, cf_numeric, cf_numeric_converged, cf_offset, cf_root, cf_series,
                            series_numeric)
from src.errors import PreconditionError
from src.series import s_equal_to_order, s_pow

F = Fraction


class TestCFSeries(unittest.TestCase):
    def test_offsets(self):
        self.assertEqual(cf_series(CFName.R, 1, 10).e0, F(1, 5))
        self.assertEqual(cf_series("T1", 1, 10).e0, 1)
        self.assertEqual(cf_series("t2", 1, 10).e0, 2)
        self.assertEqual(cf_offset("S1"), F(3, 4))

    def test_leading_coefficients(self):
        r = cf_series("R", 1, 6)
        # R(q) = q^{1/5}(1 - q + q^2 - ...)
        self.assertEqual(r.coefficient(F(1, 5)), 1)
        self.assertEqual(r.coefficient(F(6, 5)), -1)
        self.assertEqual(r.order, 6)

    def test_scale(self):
        r = cf_series("R", 5, 12)
        self.assertEqual(r.e0, 1)
        self.assertEqual(r.order, 12)
        with self.assertRaises(PreconditionError):
            cf_series("R", 0, 5)

    def test_eighth_root_of_r(self):
        order = 10
        root = cf_root("R", 8, 1, order)
        self.assertEqual(root.e0, F(1, 40))
        self.assertEqual(root.order, order)
        self.assertTrue(s_equal_to_order(s_pow(root, 8), cf_series("R", 1, order), order).equal)

    def test_root_index(self):
        with self.assertRaises(PreconditionError):
            cf_root("T1", 0, 1, 5)


class TestCFNumeric(unittest.TestCase):
    def test_r_display_matches_series(self):
        series = cf_series("R", 1, 40)
        for q in (0.05, 0.1, 0.2):
            value = cf_numeric("R", q, 30)
            self.assertLess(abs(value - series_numeric(series, q)), 1e-8)

    def test_converged(self):
        value, depth = cf_numeric_converged("R", 0.1)
        self.assertGreaterEqual(depth, 16)
        self.assertLess(abs(value - cf_numeric("R", 0.1, 60)), mpmath.mpf("1e-25"))

    def test_bad_arguments(self):
        with self.assertRaises(PreconditionError):
            cf_numeric("R", 0.1, 0)
        with self.assertRaises(PreconditionError):
            cf_numeric("R", 1.5, 10)
        with self.assertRaises(PreconditionError):
            series_numeric(cf_series("R", 1, 5), 0)

    def test_parse(self):
        self.assertIs(CFName.parse("s2"), CFName.S2)
        self.assertIs(CFName.parse(CFName.T1), CFName.T1)
        with self.assertRaises(PreconditionError):
            CFName.parse("X")


if __name__ == '__main__':
    unittest.main()
