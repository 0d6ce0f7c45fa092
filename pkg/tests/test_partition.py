"""Tests for partition: brute force, magnitude DP, walk tables, one-bead and pattern sums."""

import math
import unittest

import numpy as np

from ipdsaw.errors import BudgetExceededError, DomainError
from ipdsaw.free_energy import critical_beta
from ipdsaw.geometry import exponent_fit
from ipdsaw.model import beads, enumerate_configs, hamiltonian
from ipdsaw.partition import (
    brute_force_Z,
    build_table,
    dp_log_Z_sequence,
    dp_Z,
    extension_log_weights,
    hamiltonian_histogram,
    one_bead_walk_Z,
    one_bead_Z,
    one_pattern_log_Z_sequence,
    one_pattern_Z,
    pattern_law,
    require_positive_beta,
    walk_repr_log_Z_sequence,
    walk_repr_Z,
    walk_table,
)
from ipdsaw.walk import make_params


def rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(a), abs(b))


class TestGoldenValues(unittest.TestCase):
    """Hand-counted small lengths."""

    def test_small_lengths(self) -> None:
        for beta in (0.0, 1.0, 2.0):
            self.assertAlmostEqual(dp_Z(1, beta), 1.0, places=12)
            self.assertAlmostEqual(dp_Z(2, beta), 3.0, places=12)
            self.assertAlmostEqual(dp_Z(3, beta), 7.0, places=12)
            self.assertLess(rel(dp_Z(4, beta), 15.0 + 2.0 * math.exp(beta)), 1e-12)

    def test_beta_zero_counts(self) -> None:
        expected = [1, 3, 7, 17, 41, 99, 239, 577]
        got = np.exp(dp_log_Z_sequence(8, 0.0))
        np.testing.assert_allclose(got, expected, rtol=1e-12)

    def test_histogram(self) -> None:
        self.assertEqual(hamiltonian_histogram(4), {0: 15, 1: 2})
        self.assertEqual(sum(hamiltonian_histogram(9).values()), 1393)


class TestEngines(unittest.TestCase):
    def test_brute_force_matches_dp(self) -> None:
        for beta in (0.0, 0.5, 1.2187, 2.0, 4.0):
            for n in range(1, 11):
                self.assertLess(rel(brute_force_Z(n, beta), dp_Z(n, beta)), 1e-10, msg=f"L={n} beta={beta}")

    def test_walk_representation_matches_dp(self) -> None:
        for beta in (0.5, 1.0, 2.0):
            p = make_params(beta)
            walk = walk_repr_log_Z_sequence(48, p)
            dp = dp_log_Z_sequence(48, beta)
            n = np.arange(1, 49)
            np.testing.assert_allclose(walk + math.log(p.c_beta) + beta * n, dp, atol=1e-8)

    def test_walk_repr_single(self) -> None:
        p = make_params(1.0)
        self.assertLess(rel(walk_repr_Z(6, p), dp_Z(6, 1.0) * math.exp(-6.0) / p.c_beta), 1e-9)

    def test_large_length_stays_finite_in_log_space(self) -> None:
        seq = dp_log_Z_sequence(1024, 3.0)
        self.assertTrue(np.all(np.isfinite(seq)))
        self.assertTrue(np.all(np.diff(seq) > 0))

    def test_guards(self) -> None:
        with self.assertRaises(BudgetExceededError):
            hamiltonian_histogram(15)
        with self.assertRaises(BudgetExceededError):
            dp_log_Z_sequence(5000, 1.0)
        with self.assertRaises(BudgetExceededError):
            walk_table(5000, make_params(1.0))


class TestCriticalDecay(unittest.TestCase):
    def test_excess_partition_decays_like_two_thirds_power(self) -> None:
        lengths = [64, 128, 256, 512]
        seq = walk_repr_log_Z_sequence(512, make_params(critical_beta()))
        report = exponent_fit("Z_excess", lengths, [math.exp(seq[n - 1]) for n in lengths])
        self.assertAlmostEqual(report.slope, -2.0 / 3.0, delta=0.07)


class TestOneBead(unittest.TestCase):
    def test_small_values(self) -> None:
        self.assertAlmostEqual(one_bead_Z(1, 1.0), 1.0)
        self.assertAlmostEqual(one_bead_Z(2, 1.0), 2.0)
        self.assertAlmostEqual(one_bead_Z(3, 1.0), 2.0)
        self.assertAlmostEqual(one_bead_Z(4, 1.5), 2.0 + 2.0 * math.exp(1.5), places=10)

    def test_against_enumeration(self) -> None:
        beta = 0.7
        for n in range(1, 10):
            brute = math.fsum(
                math.exp(beta * hamiltonian(cfg)) for cfg in enumerate_configs(n) if beads(cfg).count == 1
            )
            self.assertLess(rel(one_bead_Z(n, beta), brute), 1e-10, msg=f"L={n}")

    def test_walk_form_agrees(self) -> None:
        for beta in (0.5, 2.0):
            p = make_params(beta)
            for n in (2, 5, 12, 30):
                self.assertLess(rel(one_bead_walk_Z(n, p), one_bead_Z(n, beta)), 1e-8, msg=f"L={n}")


class TestExtensionWeights(unittest.TestCase):
    def test_sum_is_excess_partition(self) -> None:
        p = make_params(1.0)
        for n in (1, 4, 20):
            total = math.fsum(np.exp(extension_log_weights(n, p)))
            self.assertLess(rel(total, walk_repr_Z(n, p)), 1e-9, msg=f"L={n}")

    def test_against_enumeration(self) -> None:
        beta = 1.5
        p = make_params(beta)
        n = 7
        weights = np.zeros(n)
        for cfg in enumerate_configs(n):
            weights[cfg.extension - 1] += math.exp(beta * hamiltonian(cfg))
        weights *= math.exp(-beta * n) / p.c_beta
        np.testing.assert_allclose(np.exp(extension_log_weights(n, p)), weights, rtol=1e-9)


class TestPatterns(unittest.TestCase):
    def test_small_sizes(self) -> None:
        beta = 1.0
        p = make_params(beta)
        seq = one_pattern_log_Z_sequence(3, p)
        self.assertAlmostEqual(seq[0], -beta)
        self.assertEqual(seq[1], -np.inf)
        self.assertAlmostEqual(one_pattern_Z(3, p), 2.0 * math.exp(-3.0), places=12)

    def test_law_is_a_probability(self) -> None:
        law = pattern_law(make_params(0.5))
        self.assertAlmostEqual(law.total, 1.0, delta=1e-4)
        self.assertLess(law.tail, 1e-13)
        self.assertAlmostEqual(float(law.probabilities().sum()), 1.0, places=12)

    def test_collapsed_phase_is_defective(self) -> None:
        law = pattern_law(make_params(2.0), n_max=64)
        self.assertEqual(law.excess_free_energy, 0.0)
        self.assertLess(law.total, 1.0)


class TestBuildTable(unittest.TestCase):
    def test_cell(self) -> None:
        cell = build_table(10, 1.0)
        self.assertLess(rel(cell.Z, dp_Z(10, 1.0)), 1e-12)
        self.assertIsNotNone(cell.extension_weights)
        self.assertLess(rel(float(cell.extension_weights.sum()), cell.Z_excess), 1e-9)

    def test_beta_zero_has_no_excess_fields(self) -> None:
        cell = build_table(6, 0.0)
        self.assertAlmostEqual(cell.Z, 99.0, places=9)
        self.assertIsNone(cell.Z_excess)
        self.assertIsNone(cell.Z_one_pattern)

    def test_require_positive_beta(self) -> None:
        with self.assertRaises(DomainError):
            require_positive_beta(0.0)


if __name__ == "__main__":
    unittest.main()
