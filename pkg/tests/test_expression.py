import unittest
from fractions import Fraction

from src.cfractions import CFName, cf_root, cf_series
from src.errors import ConfigError, ExpressionParseError
from src.expression import CF, Const, Omega, Product, Quotient, Root, eta, expand_expr, parse_expr, q
from src.qfunctions import omega, pochhammer
from src.series import s_equal_to_order
from src.series_cache import DEFAULT_CACHE_SIZE, SeriesCache

F = Fraction


def assert_same(test, f, g, order):
    result = s_equal_to_order(f, g, order)
    test.assertTrue(result.equal, f"differ at q^{result.exponent}: {result.delta}")


class TestExpansion(unittest.TestCase):
    def setUp(self):
        SeriesCache().clear_cache()

    def test_eta_quotient(self):
        assert_same(self, expand_expr("eta(20) / eta(2)", 10), eta((20, 1), (2, -1)).build(10), 10)

    def test_theta_quotient_is_t1(self):
        built = expand_expr("f(-3,-17) / f(-7,-13) * q^1", 12)
        self.assertEqual(built.order, 12)
        assert_same(self, built, cf_series(CFName.T1, 1, 12), 12)

    def test_root(self):
        assert_same(self, expand_expr("root(R(1), 8)", 6), cf_root("R", 8, 1, 6), 6)

    def test_substitution(self):
        assert_same(self, expand_expr("sub(eta(1), 5)", 10), eta((5, 1)).build(10), 10)

    def test_constants(self):
        self.assertEqual(expand_expr("sqrt5^2", 3).coefficient(0), 5)
        self.assertEqual(expand_expr("2*beta - s10p", 3).coefficient(0), 0)
        self.assertEqual(expand_expr("alpha(9) + alpha(1)", 3).coefficient(0), 0)

    def test_omega(self):
        assert_same(self, expand_expr("omega(5)", 20), pochhammer((1, 2), 2, 20), 20)
        assert_same(self, expand_expr("omega(3, 1/5)", 4), omega(3, F(1, 5), 4), 4)

    def test_polynomial(self):
        s = expand_expr("(1+q)^2", 5)
        self.assertEqual([s.coefficient(i) for i in range(5)], [1, 2, 1, 0, 0])

    def test_negative_valuation(self):
        s = expand_expr("q^-1 * poch(-1, 1)", 6)
        self.assertEqual(s.order, 6)
        self.assertEqual(s.e0, -1)
        self.assertEqual(s.coefficient(0), -1)

    def test_fractional_power(self):
        s = expand_expr("(1-q)^(1/2) * (1-q)^(1/2)", 8)
        self.assertEqual([s.coefficient(i) for i in range(8)], [1, -1, 0, 0, 0, 0, 0, 0])


class TestParser(unittest.TestCase):
    def test_tree_shapes(self):
        self.assertIsInstance(parse_expr("eta(20)/eta(2)"), Quotient)
        self.assertIsInstance(parse_expr("f(-3,-17) * q^1"), Product)
        self.assertEqual(parse_expr("root(T1(2), 2)"), Root(CF(CFName.T1, F(2)), 2))
        self.assertEqual(parse_expr("2 * 3"), Const(6))
        self.assertEqual(parse_expr("q^(3/4)"), q(F(3, 4)))

    def test_bare_exponent_before_quotient(self):
        self.assertIsInstance(parse_expr("q^2/eta(2)"), Quotient)
        self.assertEqual(parse_expr("q^2/3"), q(F(2, 3)))

        s = expand_expr("q^2/eta(2)", 3)
        self.assertEqual(s.e0, F(23, 12))
        self.assertEqual((s.coefficient(F(23, 12)), s.coefficient(F(29, 12)), s.coefficient(F(35, 12))), (1, 0, 1))
        assert_same(self, s, expand_expr("q^(2)/eta(2)", 3), 3)

        # q/(q;q)_inf: shifted partition numbers
        s = expand_expr("q^1/f(-1,-2)", 6)
        self.assertEqual([s.coefficient(i) for i in range(6)], [0, 1, 1, 2, 3, 5])

    def test_needs_field(self):
        self.assertFalse(parse_expr("omega(5) * eta(1)").needs_field())
        self.assertTrue(parse_expr("omega(1)").needs_field())
        self.assertTrue(parse_expr("sqrt5 * eta(1)").needs_field())

    def test_error_positions(self):
        cases = [
            ("eta(20) $ 2", 8),
            ("eta(20", 6),
            ("foo(1)", 0),
            ("1 + omega(10)", 4),
            ("R(0)", 0),
            ("f(-1)", 0),
            ("eta(2) eta(3)", 7),
        ]
        for text, position in cases:
            with self.subTest(text=text):
                with self.assertRaises(ExpressionParseError) as ctx:
                    parse_expr(text)
                self.assertEqual(ctx.exception.position, position)


class TestSeriesCache(unittest.TestCase):
    def setUp(self):
        self.cache = SeriesCache()
        self.cache.clear_cache()

    def test_singleton(self):
        self.assertIs(SeriesCache(), self.cache)

    def test_hits_and_misses(self):
        node = Omega(3)
        first = node.build(10)
        self.assertEqual(self.cache.get_stats()["misses"], 1)
        lower = node.build(8)
        self.assertEqual(lower.order, 8)
        self.assertEqual(self.cache.get_stats()["hits"], 1)
        assert_same(self, lower, first, 8)
        node.build(12)
        stats = self.cache.get_stats()
        self.assertEqual((stats["entries"], stats["misses"]), (1, 2))

    def test_size_bound(self):
        self.cache.resize(2)
        try:
            for k in (1, 3, 7):
                Omega(k).build(4)
            stats = self.cache.get_stats()
            self.assertEqual((stats["entries"], stats["evictions"], stats["maxsize"]), (2, 1, 2))
            # Omega(1) was least recently used, so it is rebuilt
            Omega(1).build(4)
            self.assertEqual(self.cache.get_stats()["misses"], 4)
            Omega(1).build(4)
            self.assertEqual(self.cache.get_stats()["hits"], 1)
            self.assertEqual(self.cache.get_stats()["entries"], 2)
        finally:
            self.cache.resize(DEFAULT_CACHE_SIZE)

    def test_bad_size(self):
        with self.assertRaises(ConfigError):
            self.cache.resize(0)

    def test_disabled(self):
        self.cache.enabled = False
        try:
            Omega(7).build(5)
            self.assertEqual(self.cache.get_stats()["entries"], 0)
        finally:
            self.cache.enabled = True


if __name__ == '__main__':
    unittest.main()
