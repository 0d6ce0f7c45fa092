"""Tests for the CLI: commands, deterministic stdout, output files, exit codes."""

import contextlib
import io
import json
import tempfile
import unittest
from pathlib import Path

from ipdsaw.cli import main
from ipdsaw.report import parse_csv, parse_json
from ipdsaw.sampler import Ensemble


def run(argv: list[str]) -> tuple[int, str]:
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = main(argv)
    return code, buf.getvalue()


class TestCritical(unittest.TestCase):
    def test_table(self) -> None:
        code, out = run(["critical"])
        self.assertEqual(code, 0)
        meta, header, rows = parse_csv(out)
        self.assertEqual(header, ["quantity", "value"])
        values = {k: float(v) for k, v in rows}
        self.assertAlmostEqual(values["beta_c"], 1.21878, delta=1e-5)
        self.assertAlmostEqual(values["airy_prime_zero"], 1.0187929716, places=9)
        self.assertEqual(meta["tool"], "ipdsaw")

    def test_stdout_is_reproducible(self) -> None:
        self.assertEqual(run(["critical"])[1], run(["critical"])[1])


class TestFreeEnergy(unittest.TestCase):
    def test_rows(self) -> None:
        code, out = run(["free-energy", "--beta-grid", "0,2"])
        self.assertEqual(code, 0)
        _, header, rows = parse_csv(out)
        self.assertEqual(header, ["beta", "excess_free_energy", "free_energy"])
        self.assertEqual(rows[1], ["2.0", "0.0", "2.0"])
        self.assertAlmostEqual(float(rows[0][2]), 0.881373587, places=8)

    def test_json_file_and_plot(self) -> None:
        d = Path(tempfile.mkdtemp(prefix="ipdsaw_cli_"))
        out = d / "fe.json"
        code, text = run(["free-energy", "--beta-grid", "1.5", "--format", "json", "--plot", "svg", "-o", str(out)])
        self.assertEqual(code, 0)
        self.assertIn("Wrote", text)
        doc = parse_json(out.read_text())
        self.assertEqual(doc["results"][0]["free_energy"], 1.5)
        self.assertIsNotNone(doc["wall_clock_seconds"])
        self.assertTrue((d / "fe_free_energy.svg").is_file())

    def test_negative_beta_is_a_config_error(self) -> None:
        code, out = run(["free-energy", "--beta-grid", "-1"])
        self.assertEqual(code, 2)
        self.assertIn("Error:", out)


class TestSampleAndAnalyze(unittest.TestCase):
    def setUp(self) -> None:
        self.dir = Path(tempfile.mkdtemp(prefix="ipdsaw_cli_"))

    def test_seed_required(self) -> None:
        code, out = run(["sample", "--beta", "1", "--length", "10"])
        self.assertEqual(code, 2)
        self.assertIn("--seed", out)

    def test_same_seed_same_output(self) -> None:
        args = ["sample", "--beta", "1.5", "--length", "12", "--samples", "30", "--seed", "5"]
        code, first = run(args)
        self.assertEqual(code, 0)
        self.assertEqual(run(args)[1], first)
        ens = Ensemble.from_text(first)
        self.assertEqual((len(ens), ens.length, ens.seed), (30, 12, 5))
        self.assertIn("# config={", first)

    def test_sample_to_file(self) -> None:
        path = self.dir / "a.txt"
        code, out = run(["sample", "--beta", "1", "--length", "8", "--samples", "4", "--seed", "1", "-o", str(path)])
        self.assertEqual(code, 0)
        self.assertIn("Wrote 4 configurations", out)
        self.assertEqual(len(Ensemble.from_text(path.read_text())), 4)

    def test_sample_rejects_several_lengths(self) -> None:
        code, _ = run(["sample", "--beta", "1", "--length", "10,20", "--seed", "1"])
        self.assertEqual(code, 2)

    def test_analyze_ensemble_file(self) -> None:
        ens = self.dir / "e.txt"
        run(["sample", "--beta", "1", "--length", "16", "--samples", "25", "--seed", "2", "-o", str(ens)])
        code, out = run(["analyze", "--ensemble", str(ens)])
        self.assertEqual(code, 0)
        _, header, rows = parse_csv(out)
        self.assertEqual(header[:3], ["beta", "L", "samples"])
        self.assertEqual(rows[0][:3], ["1.0", "16", "25"])

    def test_analyze_fits_three_lengths(self) -> None:
        out = self.dir / "an.json"
        code, _ = run(
            ["analyze", "--betas", "2", "--lengths", "16,32,64", "--samples", "30", "--seed", "1", "--format", "json", "-o", str(out)]
        )
        self.assertEqual(code, 0)
        doc = parse_json(out.read_text())
        self.assertEqual(len(doc["results"]), 3)
        self.assertIn("beta=2.0:N", doc["fits"])
        self.assertEqual(doc["config"]["seed"], 1)


class TestWulffAndIpsaw(unittest.TestCase):
    def test_wulff(self) -> None:
        code, out = run(["wulff", "--beta", "2", "--grid", "40"])
        self.assertEqual(code, 0)
        meta, header, rows = parse_csv(out)
        self.assertEqual(header, ["s", "gamma"])
        self.assertEqual(len(rows), 41)
        self.assertAlmostEqual(float(rows[0][1]), 0.0, places=9)
        self.assertAlmostEqual(float(rows[-1][1]), 0.0, places=9)
        self.assertAlmostEqual(json.loads(meta["area"]), 1.0, delta=1e-3)

    def test_wulff_extended_phase(self) -> None:
        code, out = run(["wulff", "--beta", "1"])
        self.assertEqual(code, 2)
        self.assertIn("Error:", out)

    def test_ipsaw(self) -> None:
        code, out = run(["ipsaw", "--family", "SAW", "--max-length", "4", "--betas", "0,1"])
        self.assertEqual(code, 0)
        meta, header, rows = parse_csv(out)
        self.assertEqual(header, ["L", "count", "Z_beta=0.0", "Z_beta=1.0"])
        self.assertEqual([r[1] for r in rows], ["4", "12", "36", "100"])
        self.assertEqual(json.loads(meta["family"]), "SAW")

    def test_ipsaw_guard(self) -> None:
        code, _ = run(["ipsaw", "--family", "SAW", "--max-length", "30"])
        self.assertEqual(code, 2)


class TestConfigCommand(unittest.TestCase):
    def test_set_get_list(self) -> None:
        ini = str(Path(tempfile.mkdtemp(prefix="ipdsaw_cli_")) / "x.ini")
        self.assertEqual(run(["--config", ini, "config", "--set", "run.seed", "9"])[0], 0)
        self.assertEqual(run(["--config", ini, "config", "--get", "run.seed"]), (0, "9\n"))
        self.assertEqual(run(["--config", ini, "config", "--list"]), (0, "run.seed=9\n"))
        self.assertEqual(run(["--config", ini, "config", "--get", "run.betas"])[0], 1)

    def test_ini_feeds_commands(self) -> None:
        ini = Path(tempfile.mkdtemp(prefix="ipdsaw_cli_")) / "x.ini"
        ini.write_text("[run]\nbetas = 2.5\n")
        _, out = run(["--config", str(ini), "free-energy"])
        self.assertEqual(parse_csv(out)[2], [["2.5", "0.0", "2.5"]])

    def test_needs_one_mode(self) -> None:
        self.assertEqual(run(["config", "--get", "--list", "run.seed"])[0], 2)


class TestSelftestCommand(unittest.TestCase):
    def test_unknown_suite_fails(self) -> None:
        code, out = run(["selftest", "S9_nothing"])
        self.assertEqual(code, 4)
        self.assertIn("Suite not found", out)


class TestNoCommand(unittest.TestCase):
    def test_help(self) -> None:
        code, out = run([])
        self.assertEqual(code, 0)
        self.assertIn("usage", out)


if __name__ == "__main__":
    unittest.main()
