"""Tests for config: value parsing, precedence of defaults, INI and flags, INI get/set/list."""

import tempfile
import unittest
from pathlib import Path

from ipdsaw.config import (
    RunConfig,
    build_run_config,
    get_value,
    list_values,
    parse_exponent,
    parse_float_list,
    parse_int_list,
    read_config,
    set_value,
)
from ipdsaw.errors import RunConfigError
from ipdsaw.free_energy import critical_beta


class TestValueParsing(unittest.TestCase):
    def test_float_list_forms(self) -> None:
        self.assertEqual(parse_float_list("0.5, 1,2"), (0.5, 1.0, 2.0))
        self.assertEqual(parse_float_list("0:1:3"), (0.0, 0.5, 1.0))
        self.assertEqual(parse_float_list("beta_c"), (critical_beta(),))

    def test_float_list_errors(self) -> None:
        with self.assertRaises(RunConfigError):
            parse_float_list("a,b")
        with self.assertRaises(RunConfigError):
            parse_float_list(",")

    def test_int_list(self) -> None:
        self.assertEqual(parse_int_list("256,512"), (256, 512))
        with self.assertRaises(RunConfigError):
            parse_int_list("1.5")

    def test_exponent(self) -> None:
        self.assertAlmostEqual(parse_exponent("2/3"), 2.0 / 3.0)
        self.assertEqual(parse_exponent("0.5"), 0.5)
        with self.assertRaises(RunConfigError):
            parse_exponent("1/0")


class TestRunConfig(unittest.TestCase):
    def setUp(self) -> None:
        self.dir = Path(tempfile.mkdtemp(prefix="ipdsaw_config_"))
        self.ini = self.dir / "run.ini"

    def test_defaults(self) -> None:
        cfg = build_run_config("free-energy", {})
        self.assertEqual(cfg.betas, (1.0,))
        self.assertEqual(cfg.fmt, "csv")
        self.assertIsNone(cfg.seed)

    def test_ini_then_flags(self) -> None:
        self.ini.write_text("[run]\nbetas = 0.5,2\nsamples = 10\nseed = 3\n")
        cfg = build_run_config("analyze", {"samples": 20, "seed": None}, self.ini)
        self.assertEqual(cfg.betas, (0.5, 2.0))
        self.assertEqual(cfg.samples, 20)
        self.assertEqual(cfg.seed, 3)
        self.assertEqual(cfg.command, "analyze")

    def test_unknown_ini_option(self) -> None:
        self.ini.write_text("[run]\ncolour = blue\n")
        with self.assertRaises(RunConfigError):
            build_run_config("critical", {}, self.ini)

    def test_malformed_ini(self) -> None:
        self.ini.write_text("no section header\n")
        with self.assertRaises(RunConfigError):
            read_config(self.ini)

    def test_sampling_needs_seed(self) -> None:
        with self.assertRaises(RunConfigError):
            build_run_config("sample", {"betas": "1", "lengths": "10"})
        cfg = build_run_config("analyze", {"ensemble": "a.txt"})
        self.assertIsNone(cfg.seed)

    def test_validation(self) -> None:
        for bad in ({"betas": "-1"}, {"thin": 0}, {"fmt": "xml"}, {"family": "XYZ"}, {"grid": 0}, {"time_exp": "x"}):
            with self.assertRaises(RunConfigError, msg=str(bad)):
                build_run_config("critical", bad)

    def test_to_dict_is_json_friendly(self) -> None:
        d = RunConfig(betas=(1.5,), lengths=(8, 16)).to_dict()
        self.assertEqual(d["betas"], [1.5])
        self.assertEqual(d["lengths"], [8, 16])


class TestIniFile(unittest.TestCase):
    def setUp(self) -> None:
        self.path = Path(tempfile.mkdtemp(prefix="ipdsaw_ini_")) / "ipdsaw.ini"

    def test_set_get_list(self) -> None:
        set_value(self.path, "run.seed", "7")
        set_value(self.path, "run.betas", "0.5,1")
        self.assertEqual(get_value(self.path, "run.seed"), "7")
        self.assertEqual(list_values(self.path), [("run.betas", "0.5,1"), ("run.seed", "7")])
        self.assertEqual(build_run_config("analyze", {}, self.path).seed, 7)

    def test_missing_key_and_file(self) -> None:
        self.assertIsNone(get_value(self.path, "run.seed"))
        self.assertEqual(list_values(self.path), [])

    def test_invalid_key(self) -> None:
        with self.assertRaises(RunConfigError):
            set_value(self.path, "seed", "1")
        with self.assertRaises(RunConfigError):
            get_value(self.path, "a.b.c")


if __name__ == "__main__":
    unittest.main()
