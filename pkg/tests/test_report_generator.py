import csv
import json
import os
import shutil
import tempfile
import unittest
from fractions import Fraction

from src.field import KElem
from src.report_generator import COLUMNS, compile_reports_to_csv, compile_reports_to_pdf, write_json_report
from src.verifier import ERROR, FAIL, PASS, Mismatch, Report


class TestReportGenerator(unittest.TestCase):
    def setUp(self):
        self.tmpdir = tempfile.mkdtemp()
        self.reports = [
            Report("pentagonal", PASS, "exact", order=Fraction(25), wall_ms=12),
            Report("thm3-zero", FAIL, "exact", order=Fraction(10),
                   first_mismatch=Mismatch(Fraction(0), KElem(0, 2)), wall_ms=40),
            Report("thm3-O1-O9-t2", FAIL, "exact", order=Fraction(10), expected="document",
                   first_mismatch=Mismatch(Fraction(7, 5), KElem(1)), wall_ms=38),
            Report("num-prodsine", PASS, "numeric", samples=["product=0.0061763"], wall_ms=3),
            Report("num-liu", ERROR, "numeric", message="SampleRejectedError: near zero"),
        ]

    def tearDown(self):
        shutil.rmtree(self.tmpdir)

    def test_csv(self):
        path = compile_reports_to_csv(self.reports, os.path.join(self.tmpdir, "out", "summary.csv"))
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
        self.assertEqual(rows[0], COLUMNS)
        self.assertEqual(len(rows), len(self.reports) + 1)
        self.assertEqual(rows[2][:5], ["thm3-zero", "fail", "exact", "10", "q^0"])
        self.assertEqual(rows[3][1], "fail (document)")
        self.assertEqual(rows[4][3], "1 samples")

    def test_pdf(self):
        path = compile_reports_to_pdf(self.reports, os.path.join(self.tmpdir, "summary.pdf"))
        with open(path, "rb") as fh:
            self.assertEqual(fh.read(5), b"%PDF-")

    def test_json(self):
        path = write_json_report(self.reports, os.path.join(self.tmpdir, "summary.json"))
        data = json.loads(path.read_text(encoding="utf-8"))
        self.assertEqual([d["id"] for d in data], [r.id for r in self.reports])
        self.assertEqual(data[2]["first_mismatch"]["exponent"], "7/5")
        self.assertEqual(data[1]["first_mismatch"]["delta_exact"], ["0", "2", "0", "0"])

    def test_default_directory(self):
        config = {"reports": {"directory": self.tmpdir, "csv": {"delimiter": ";", "encoding": "utf-8"}}}
        path = compile_reports_to_csv(self.reports, config=config)
        self.assertEqual(path.parent, type(path)(self.tmpdir))
        self.assertTrue(path.name.startswith("verification_"))
        with open(path, encoding="utf-8") as fh:
            self.assertIn(";", fh.readline())


if __name__ == '__main__':
    unittest.main()
