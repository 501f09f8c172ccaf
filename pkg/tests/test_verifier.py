import json
import unittest
from fractions import Fraction

import pytest

from src.errors import UnknownIdentityError
from src.expression import q
from src.field import SQRT_10M2S5, SQRT_10P2S5
from src.registry import C_A1, G_ETA, REGISTRY, UNITS, IdentitySpec
from src.series import s_sub
from src.verifier import (ERROR, FAIL, PASS, Report, exit_code, reports_to_json, summarize, verify,
                          verify_all)

F = Fraction


class TestVerifyExact(unittest.TestCase):
    def test_classical_entries_pass(self):
        for identity_id in ("pentagonal", "psi-product", "lemma2-f1-a=q-b=q2", "x20-factorization"):
            with self.subTest(id=identity_id):
                report = verify(identity_id)
                self.assertEqual(report.status, PASS, report.message)
                self.assertIsNone(report.first_mismatch)

    def test_product_of_omegas(self):
        report = verify("eq-prodK", order=30)
        self.assertEqual(report.status, PASS)
        self.assertEqual(report.order, 30)

    def test_order_override(self):
        self.assertEqual(verify("pentagonal", order="61/5").order, Fraction(61, 5))

    def test_constant_term_mismatch(self):
        # (1+alpha_9) Omega_9 - (1+alpha_1) Omega_1 starts at 2 beta, not 0
        report = verify("thm3-zero", order=8)
        self.assertEqual(report.status, FAIL)
        mismatch = report.to_dict()["first_mismatch"]
        self.assertEqual(mismatch["exponent"], "0")
        self.assertEqual(mismatch["delta_exact"], ["0", "2", "0", "0"])
        self.assertTrue(mismatch["delta_numeric"].startswith("3.80422606518"))
        self.assertEqual(exit_code([report]), 1)

    def test_unknown_id(self):
        with self.assertRaises(UnknownIdentityError):
            verify("no-such-identity")


class TestInjectedMismatch(unittest.TestCase):
    ID = "pentagonal-perturbed"

    def setUp(self):
        base = REGISTRY["pentagonal"]
        REGISTRY[self.ID] = IdentitySpec(self.ID, "pentagonal plus 3 q^(7/2)", "classical",
                                         lhs=base.lhs + 3 * q(Fraction(7, 2)), rhs=base.rhs)

    def tearDown(self):
        REGISTRY.pop(self.ID, None)

    def test_first_mismatch_is_reported(self):
        report = verify(self.ID)
        self.assertEqual(report.status, FAIL)
        mismatch = report.to_dict()["first_mismatch"]
        self.assertEqual(mismatch["exponent"], "7/2")
        self.assertEqual(mismatch["delta_exact"], ["3", "0", "0", "0"])

    def test_mismatch_above_order_is_invisible(self):
        self.assertEqual(verify(self.ID, order=3).status, PASS)


class TestRingHint(unittest.TestCase):
    def test_rational_run_rejects_field_entries(self):
        report = verify("eq-prodK", order=5, ring_hint="rational")
        self.assertEqual(report.status, ERROR)
        self.assertIn("RingError", report.message)
        self.assertEqual(exit_code([report]), 1)

    def test_rational_run_of_rational_entry(self):
        self.assertEqual(verify("pentagonal", order=10, ring_hint="rational").status, PASS)

    def test_unknown_hint(self):
        self.assertEqual(verify("pentagonal", order=5, ring_hint="complex").status, ERROR)


class TestNumericEntries(unittest.TestCase):
    def test_sine_product(self):
        report = verify("num-prodsine")
        self.assertEqual(report.status, PASS)
        d = report.to_dict()
        self.assertIn("samples", d)
        self.assertNotIn("order", d)


class TestReports(unittest.TestCase):
    def test_field_order(self):
        d = verify("pentagonal", order=5).to_dict()
        self.assertEqual(list(d), ["id", "status", "mode", "order", "first_mismatch", "wall_ms"])
        self.assertEqual(d["order"], "5")

    def test_deterministic_json(self):
        first = reports_to_json(verify("pentagonal", order=10, deterministic=True))
        second = reports_to_json(verify("pentagonal", order=10, deterministic=True))
        self.assertEqual(first, second)
        self.assertEqual(json.loads(first)["wall_ms"], 0)

    def test_exit_code(self):
        self.assertEqual(exit_code([Report("a", PASS, "exact")]), 0)
        self.assertEqual(exit_code([Report("a", FAIL, "exact", expected="document")]), 0)
        self.assertEqual(exit_code([Report("a", PASS, "exact"), Report("b", FAIL, "exact")]), 1)
        self.assertEqual(exit_code([Report("a", ERROR, "numeric")]), 1)

    def test_summarize(self):
        reports = [Report("a", PASS, "exact"), Report("b", FAIL, "exact", expected="document"),
                   Report("c", ERROR, "exact")]
        counts = summarize(reports)
        self.assertEqual((counts[PASS], counts[FAIL], counts[ERROR], counts["total"]), (1, 1, 1, 3))
        self.assertEqual(counts["expected_failures"], 1)


class TestVerifyAll(unittest.TestCase):
    def test_subset_in_registry_order(self):
        ids = ["x20-factorization", "pentagonal", "num-prodsine"]
        reports = verify_all(ids=ids, profile="quick", deterministic=True, progress=False)
        self.assertEqual([r.id for r in reports], ids)
        self.assertTrue(all(r.status == PASS for r in reports))
        self.assertTrue(all(r.wall_ms == 0 for r in reports))
        self.assertEqual(exit_code(reports), 0)

    def test_unknown_id_fails_fast(self):
        with self.assertRaises(UnknownIdentityError):
            verify_all(ids=["pentagonal", "nope"], progress=False)

    def test_progress_callback(self):
        seen = []
        verify_all(ids=["pentagonal", "x20-factorization"], progress=False,
                   on_progress=lambda done, total: seen.append((done, total)))
        self.assertEqual(seen, [(1, 2), (2, 2)])


class TestTheoremUnits(unittest.TestCase):
    ORDER = 2

    def _delta(self, identity_id):
        spec = REGISTRY[identity_id]
        return s_sub(spec.lhs.build(self.ORDER), spec.rhs.build(self.ORDER))

    @staticmethod
    def _off_lattice(series):
        return [e for e, _ in series.terms() if (5 * e).denominator != 1]

    def test_unit_offsets(self):
        offsets = {"inv": F(1, 5), "ts": F(6, 5), "s1t2": F(0), "t2s1": F(2), "t1s1": F(3, 2), "t1s2": F(11, 8)}
        for key, offset in offsets.items():
            with self.subTest(unit=key):
                built = (G_ETA * UNITS[key]).build(self.ORDER + 1)
                self.assertEqual((built.e0, built.leading_coefficient), (offset, 1))

    def test_printed_forms_leave_the_lattice(self):
        delta = self._delta("thm3-O1-O9")
        self.assertEqual(delta.coefficient(F(3, 2)), C_A1)
        self.assertEqual(min(self._off_lattice(delta)), F(3, 2))

        delta = self._delta("thm3-O99-O11")
        self.assertEqual(delta.coefficient(F(11, 8)), -(2 * SQRT_10M2S5 + 2 * SQRT_10P2S5))
        self.assertEqual(min(self._off_lattice(delta)), F(11, 8))

        report = verify("thm3-O1-O9", order=self.ORDER)
        self.assertEqual(report.status, FAIL)
        self.assertLessEqual(report.first_mismatch.exponent, F(3, 2))

    def test_t2_readings_stay_on_the_lattice(self):
        for identity_id in ("thm3-O1-O9-t2", "thm3-O99-O11-t2"):
            with self.subTest(id=identity_id):
                self.assertEqual(self._off_lattice(self._delta(identity_id)), [])


@pytest.mark.slow
class TestFittedTheorem(unittest.TestCase):
    def test_o1_o9_fitted(self):
        report = verify("thm3-O1-O9-fitted")
        self.assertEqual(report.status, PASS, report.message)
        self.assertEqual(len(report.details), 5)


if __name__ == '__main__':
    unittest.main()
