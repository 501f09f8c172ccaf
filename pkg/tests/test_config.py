import os
import shutil
import tempfile
import unittest

from src.config import DEFAULTS, QUICK_ORDERS, apply_profile, load_config
from src.errors import ConfigError


class TestConfig(unittest.TestCase):
    def setUp(self):
        self.tmpdir = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.tmpdir)

    def _write(self, text):
        path = os.path.join(self.tmpdir, "config.yaml")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
        return path

    def test_shipped_config_matches_defaults(self):
        config = load_config()
        self.assertEqual(config["verification"]["orders"], DEFAULTS["verification"]["orders"])
        self.assertEqual(config["numeric"]["precision_digits"], 40)
        self.assertTrue(config["verify_all"]["deterministic_timing"])
        self.assertEqual(config["verification"]["cache_size"], 256)

    def test_partial_file_is_merged(self):
        config = load_config(self._write("verification:\n  orders:\n    classical: 12\n"))
        self.assertEqual(config["verification"]["orders"]["classical"], 12)
        self.assertEqual(config["verification"]["orders"]["prodK"], 30)
        self.assertEqual(config["reports"]["csv"]["delimiter"], ",")
        self.assertEqual(DEFAULTS["verification"]["orders"]["classical"], 25)

    def test_missing_file(self):
        with self.assertRaises(ConfigError):
            load_config(os.path.join(self.tmpdir, "absent.yaml"))

    def test_malformed_file(self):
        with self.assertRaises(ConfigError):
            load_config(self._write("verification: [unclosed\n"))
        with self.assertRaises(ConfigError):
            load_config(self._write("- just\n- a list\n"))

    def test_quick_profile(self):
        quick = apply_profile(DEFAULTS, "quick")
        for family, order in QUICK_ORDERS.items():
            self.assertEqual(quick["verification"]["orders"][family], order)
        self.assertEqual(quick["verification"]["orders"]["classical"], 25)
        self.assertEqual(quick["verify_all"]["profile"], "quick")
        self.assertEqual(DEFAULTS["verification"]["orders"]["theorem3"], 10)
        with self.assertRaises(ConfigError):
            apply_profile(DEFAULTS, "slow")


if __name__ == '__main__':
    unittest.main()
