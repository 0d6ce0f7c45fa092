"""Tests for wulff: integrated cumulant, gradient inversion, rate function, limit curve."""

import os
import unittest

import numpy as np

from ipdsaw.errors import DomainError
from ipdsaw.walk import make_params
from ipdsaw.wulff import (
    L_Lambda,
    a_beta,
    g_rate,
    g_rate_dp,
    grad_L_Lambda,
    hessian_L_Lambda,
    in_domain,
    invert_grad,
    star_area,
    wulff_curve,
    wulff_objective,
)

SLOW = bool(os.environ.get("IPDSAW_SLOW"))


class TestIntegratedCumulant(unittest.TestCase):
    def setUp(self) -> None:
        self.p = make_params(2.0)

    def test_domain(self) -> None:
        self.assertTrue(in_domain(self.p, 0.5, -0.25))
        self.assertFalse(in_domain(self.p, 1.5, 0.0))
        with self.assertRaises(DomainError):
            L_Lambda(self.p, 0.0, 1.2)

    def test_gradient_by_finite_differences(self) -> None:
        h0, h1, eps = 0.4, -0.1, 1e-4
        d0, d1 = grad_L_Lambda(self.p, h0, h1)
        fd0 = (L_Lambda(self.p, h0 + eps, h1) - L_Lambda(self.p, h0 - eps, h1)) / (2 * eps)
        fd1 = (L_Lambda(self.p, h0, h1 + eps) - L_Lambda(self.p, h0, h1 - eps)) / (2 * eps)
        self.assertAlmostEqual(d0, fd0, places=6)
        self.assertAlmostEqual(d1, fd1, places=6)

    def test_hessian_positive_definite(self) -> None:
        hess = hessian_L_Lambda(self.p, 0.3, 0.1)
        self.assertTrue(np.all(np.linalg.eigvalsh(hess) > 0))

    def test_inversion_round_trip(self) -> None:
        for h0, h1 in [(0.5, -0.25), (0.3, 0.1), (-0.8, 0.2)]:
            back = invert_grad(self.p, grad_L_Lambda(self.p, h0, h1))
            self.assertAlmostEqual(back[0], h0, places=8)
            self.assertAlmostEqual(back[1], h1, places=8)

    def test_symmetric_target(self) -> None:
        h0, h1 = invert_grad(self.p, (0.2, 0.0))
        self.assertAlmostEqual(h1, -h0 / 2.0, places=12)
        self.assertAlmostEqual(grad_L_Lambda(self.p, h0, h1)[0], 0.2, places=9)
        self.assertEqual(invert_grad(self.p, (0.0, 0.0)), (0.0, 0.0))


class TestRate(unittest.TestCase):
    def setUp(self) -> None:
        self.p = make_params(2.0)

    def test_negative_and_decreasing(self) -> None:
        a, b = g_rate(self.p, 0.05), g_rate(self.p, 0.2)
        self.assertLess(a, 0.0)
        self.assertLess(b, a)
        with self.assertRaises(DomainError):
            g_rate(self.p, 0.0)

    def test_objective_forms_agree(self) -> None:
        for a in (1.5, 2.5):
            self.assertAlmostEqual(
                wulff_objective(self.p, a, "rate"), wulff_objective(self.p, a, "expanded"), places=9
            )
        with self.assertRaises(ValueError):
            wulff_objective(self.p, 1.0, "other")

    def test_dp_rate_bad_input(self) -> None:
        with self.assertRaises(DomainError):
            g_rate_dp(self.p, 0.0, 10)
        with self.assertRaises(DomainError):
            g_rate_dp(self.p, 0.1, 0)

    def test_dp_rate_is_negative(self) -> None:
        self.assertLess(g_rate_dp(self.p, 0.1, 20, difference=False), 0.0)


class TestWulffCurve(unittest.TestCase):
    @classmethod
    def setUpClass(cls) -> None:
        cls.data = wulff_curve(make_params(2.0), grid=200)

    def test_endpoints_and_symmetry(self) -> None:
        c = self.data.curve
        self.assertLess(max(abs(c[0]), abs(c[-1])), 1e-9)
        self.assertLess(float(np.max(np.abs(c - c[::-1]))), 1e-9)
        self.assertGreater(self.data.peak, 0.0)

    def test_unit_area(self) -> None:
        self.assertAlmostEqual(self.data.area, 1.0, delta=1e-4)
        # gamma(s) = a gamma*(s/a) has area a^2 times the area under gamma*
        self.assertAlmostEqual(self.data.a_beta**2 * star_area(self.data.params, self.data.htilde0), 1.0, delta=1e-4)

    def test_evaluate_outside_support(self) -> None:
        self.assertEqual(float(self.data.evaluate(np.array([-1.0]))[0]), 0.0)
        self.assertEqual(float(self.data.evaluate(np.array([self.data.a_beta + 1.0]))[0]), 0.0)

    def test_extended_phase_rejected(self) -> None:
        with self.assertRaises(DomainError):
            a_beta(make_params(1.0))
        with self.assertRaises(DomainError):
            wulff_curve(make_params(2.0), grid=0)


@unittest.skipUnless(SLOW, "set IPDSAW_SLOW=1")
class TestRateAgainstFiniteN(unittest.TestCase):
    def test_difference_estimator(self) -> None:
        p = make_params(2.0)
        for u in (0.05, 0.1):
            self.assertAlmostEqual(g_rate(p, u), g_rate_dp(p, u, 200), delta=0.02, msg=f"u={u}")


if __name__ == "__main__":
    unittest.main()
