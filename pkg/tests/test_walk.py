"""Tests for walk: increment law, cumulant, sampling, excursions, finite-n DPs."""

import math
import unittest

import numpy as np

from ipdsaw.errors import DomainError, InvalidWalkError
from ipdsaw.util import make_rng
from ipdsaw.walk import (
    WalkPath,
    area_log_probability,
    cumulant,
    cumulant_derivative,
    excursions,
    finite_h,
    geometric_area,
    increment_pmf,
    is_positive_excursion,
    laplace_convolve,
    make_params,
    pmf_sums,
    sample_increment,
    sample_increments,
    sample_walk,
    walk_from_values,
    walk_probability,
)


class TestModelParams(unittest.TestCase):
    """Closed forms against truncated series."""

    def test_closed_forms(self) -> None:
        for beta in (0.3, 1.0, 2.5):
            p = make_params(beta)
            x = math.exp(-beta / 2)
            self.assertAlmostEqual(p.c_beta, (1 + x) / (1 - x), places=12)
            self.assertAlmostEqual(p.gamma_beta, p.c_beta * math.exp(-beta), places=12)
            total, second = pmf_sums(p)
            self.assertAlmostEqual(total, 1.0, places=12)
            self.assertAlmostEqual(second, p.sigma2_beta, places=9)

    def test_nonpositive_beta_rejected(self) -> None:
        for beta in (0.0, -1.0, float("inf")):
            with self.assertRaises(DomainError):
                make_params(beta)

    def test_pmf_symmetric(self) -> None:
        p = make_params(1.0)
        self.assertEqual(increment_pmf(p, 3), increment_pmf(p, -3))
        self.assertAlmostEqual(increment_pmf(p, 0), 1 / p.c_beta)


class TestCumulant(unittest.TestCase):
    def setUp(self) -> None:
        self.p = make_params(2.0)

    def test_zero_at_origin(self) -> None:
        self.assertAlmostEqual(cumulant(self.p, 0.0), 0.0, places=14)
        self.assertAlmostEqual(cumulant_derivative(self.p, 0.0, 1), 0.0, places=14)
        self.assertAlmostEqual(cumulant_derivative(self.p, 0.0, 2), self.p.sigma2_beta, places=10)

    def test_even(self) -> None:
        self.assertAlmostEqual(cumulant(self.p, 0.4), cumulant(self.p, -0.4), places=14)

    def test_derivatives_match_finite_differences(self) -> None:
        h, eps = 0.3, 1e-6
        d1 = (cumulant(self.p, h + eps) - cumulant(self.p, h - eps)) / (2 * eps)
        self.assertAlmostEqual(cumulant_derivative(self.p, h, 1), d1, places=6)
        d2 = (cumulant_derivative(self.p, h + eps, 1) - cumulant_derivative(self.p, h - eps, 1)) / (2 * eps)
        self.assertAlmostEqual(cumulant_derivative(self.p, h, 2), d2, places=5)

    def test_domain(self) -> None:
        with self.assertRaises(DomainError):
            cumulant(self.p, 1.0)
        with self.assertRaises(ValueError):
            cumulant_derivative(self.p, 0.0, 3)


class TestSampling(unittest.TestCase):
    def test_increment_moments(self) -> None:
        p = make_params(1.0)
        inc = sample_increments(p, make_rng(7), 200_000)
        self.assertLess(abs(float(inc.mean())), 0.03)
        self.assertLess(abs(float(inc.var()) / p.sigma2_beta - 1.0), 0.05)

    def test_single_draws_follow_pmf(self) -> None:
        p = make_params(2.0)
        rng = make_rng(11)
        draws = [sample_increment(p, rng) for _ in range(20_000)]
        self.assertTrue(all(isinstance(k, int) for k in draws[:10]))
        for k in (0, 1, -1):
            freq = draws.count(k) / len(draws)
            self.assertAlmostEqual(freq, increment_pmf(p, k), delta=0.02)

    def test_sample_walk_is_reproducible(self) -> None:
        p = make_params(1.5)
        a = sample_walk(50, p, make_rng(3))
        b = sample_walk(50, p, make_rng(3))
        self.assertEqual(a, b)
        self.assertEqual(a.steps, 50)

    def test_walk_probability(self) -> None:
        p = make_params(1.0)
        self.assertAlmostEqual(walk_probability(walk_from_values([0, 1, 0]), p), (p.x / p.c_beta) ** 2, places=14)


class TestWalkPath(unittest.TestCase):
    def test_must_start_at_zero(self) -> None:
        with self.assertRaises(InvalidWalkError):
            WalkPath((1, 0))

    def test_area_and_positive_excursion(self) -> None:
        w = walk_from_values([0, 2, 3, 1, 0])
        self.assertEqual(geometric_area(w), 6)
        self.assertEqual(geometric_area(w, 2), 5)
        self.assertTrue(is_positive_excursion(w))
        self.assertFalse(is_positive_excursion(walk_from_values([0, 1, 0, 1, 0])))

    def test_excursions(self) -> None:
        w = walk_from_values([0, 1, -1, 0])
        ex = excursions(w)
        self.assertEqual([(e.start, e.end) for e in ex], [(0, 2), (2, 3)])
        self.assertEqual([e.area for e in ex], [3, 2])
        self.assertEqual(excursions(walk_from_values([0, 0, 0])), [])


class TestFiniteDP(unittest.TestCase):
    def test_laplace_convolve_matches_direct(self) -> None:
        a = np.array([0.0, 1.0, 2.0, 0.5, 0.0])
        x = 0.4
        direct = np.array([sum(a[i] * x ** abs(i - j) for i in range(a.size)) for j in range(a.size)])
        np.testing.assert_allclose(laplace_convolve(a, x), direct, rtol=1e-13)

    def test_finite_h_zero_delta(self) -> None:
        self.assertAlmostEqual(finite_h(make_params(1.0), 0.0, 20), 0.0, places=10)

    def test_finite_h_decreases_with_delta(self) -> None:
        p = make_params(1.0)
        self.assertLess(finite_h(p, 0.5, 20), finite_h(p, 0.1, 20))
        with self.assertRaises(DomainError):
            finite_h(p, -0.1, 5)

    def test_area_probability_small_cases(self) -> None:
        p = make_params(1.0)
        self.assertAlmostEqual(area_log_probability(1, 0, p), -math.log(p.c_beta), places=12)
        expected = math.log(2 * p.x**2 / p.c_beta**2)
        self.assertAlmostEqual(area_log_probability(2, 1, p), expected, places=12)

    def test_area_probability_bad_input(self) -> None:
        with self.assertRaises(DomainError):
            area_log_probability(0, 1, make_params(1.0))


if __name__ == "__main__":
    unittest.main()
