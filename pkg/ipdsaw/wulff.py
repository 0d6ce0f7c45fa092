"""Collapsed-phase limit shape from the integrated cumulant.

For H = (h0, h1) the integrated cumulant is L_Lambda(H) = int_0^1 L(x h0 + h1) dx,
defined on the strip where the whole segment x h0 + h1 stays in (-beta/2, beta/2).
Its gradient is a diffeomorphism onto the plane; inverting it at (u, 0) gives the
rate g(u), the extension constant a_beta, and the limit curve gamma_beta.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad, simpson
from scipy.optimize import brentq, minimize_scalar

from .constants import (
    A_SCAN_HIGH,
    A_SCAN_LOW,
    A_SCAN_POINTS,
    A_XTOL,
    DOMAIN_MARGIN,
    NEWTON_MAX_HALVINGS,
    NEWTON_MAX_ITER,
    NEWTON_TOL,
    QUAD_EPSABS,
)
from .errors import ConvergenceError, DomainError
from .walk import ModelParams, area_log_probability, cumulant, cumulant_derivative

logger = logging.getLogger(__name__)

Point = tuple[float, float]


def in_domain(params: ModelParams, h0: float, h1: float, margin: float = 0.0) -> bool:
    """True when both segment endpoints h1 and h0 + h1 lie inside (-beta/2 + margin, beta/2 - margin)."""
    bound = params.beta / 2.0 - margin
    return abs(h1) < bound and abs(h0 + h1) < bound


def _require_domain(params: ModelParams, h0: float, h1: float) -> None:
    if not in_domain(params, h0, h1):
        raise DomainError(f"(h0, h1) = ({h0}, {h1}) outside the cumulant domain for beta = {params.beta}")


def _integrate(fn, a: float = 0.0, b: float = 1.0) -> float:
    return quad(fn, a, b, epsabs=QUAD_EPSABS, epsrel=QUAD_EPSABS, limit=200)[0]


def L_Lambda(params: ModelParams, h0: float, h1: float) -> float:
    """int_0^1 L(x h0 + h1) dx."""
    _require_domain(params, h0, h1)
    return _integrate(lambda x: cumulant(params, x * h0 + h1))


def grad_L_Lambda(params: ModelParams, h0: float, h1: float) -> Point:
    """(int x L'(x h0 + h1) dx, int L'(x h0 + h1) dx)."""
    _require_domain(params, h0, h1)
    d0 = _integrate(lambda x: x * cumulant_derivative(params, x * h0 + h1, 1))
    d1 = _integrate(lambda x: cumulant_derivative(params, x * h0 + h1, 1))
    return d0, d1


def hessian_L_Lambda(params: ModelParams, h0: float, h1: float) -> np.ndarray:
    """int [[x^2, x], [x, 1]] L''(x h0 + h1) dx."""
    _require_domain(params, h0, h1)
    a = _integrate(lambda x: x * x * cumulant_derivative(params, x * h0 + h1, 2))
    b = _integrate(lambda x: x * cumulant_derivative(params, x * h0 + h1, 2))
    c = _integrate(lambda x: cumulant_derivative(params, x * h0 + h1, 2))
    return np.array([[a, b], [b, c]])


def _invert_symmetric(params: ModelParams, u: float) -> Point:
    """Target (u, 0): by evenness of L the solution has h1 = -h0/2, a 1-d monotone root."""
    if u == 0.0:
        return 0.0, 0.0
    sign = 1.0 if u > 0 else -1.0
    target = abs(u)
    top = params.beta - 4.0 * DOMAIN_MARGIN

    def moment(h0: float) -> float:
        return _integrate(lambda x: x * cumulant_derivative(params, (x - 0.5) * h0, 1)) - target

    if moment(top) <= 0.0:
        raise ConvergenceError(
            f"target u = {u} not reachable within margin {DOMAIN_MARGIN} of the domain boundary",
            (top, moment(top)),
        )
    h0 = brentq(moment, 0.0, top, xtol=1e-15, rtol=4 * np.finfo(float).eps)
    return sign * h0, -sign * h0 / 2.0


def invert_grad(params: ModelParams, target: Point) -> Point:
    """H~ with grad L_Lambda(H~) = target, by damped Newton with domain backtracking."""
    u, v = float(target[0]), float(target[1])
    if v == 0.0:
        return _invert_symmetric(params, u)
    h = np.zeros(2)
    goal = np.array([u, v])
    resid = goal - np.array(grad_L_Lambda(params, *h))
    for it in range(NEWTON_MAX_ITER):
        norm = float(np.linalg.norm(resid))
        if norm <= NEWTON_TOL:
            logger.debug("Newton converged in %d iterations", it)
            return float(h[0]), float(h[1])
        step = np.linalg.solve(hessian_L_Lambda(params, *h), resid)
        t = 1.0
        for _ in range(NEWTON_MAX_HALVINGS):
            cand = h + t * step
            if in_domain(params, cand[0], cand[1], DOMAIN_MARGIN):
                cand_resid = goal - np.array(grad_L_Lambda(params, *cand))
                if np.linalg.norm(cand_resid) < norm:
                    h, resid = cand, cand_resid
                    break
            t *= 0.5
        else:
            raise ConvergenceError("Newton step stagnated", (float(h[0]), float(h[1]), norm))
    raise ConvergenceError("Newton did not converge", (float(h[0]), float(h[1])))


def g_rate(params: ModelParams, u: float) -> float:
    """g(u) = -u h~0(u, 0) + L_Lambda(H~(u, 0)); nonpositive."""
    if not u > 0.0:
        raise DomainError(f"u must be positive, got {u}")
    h0, h1 = invert_grad(params, (u, 0.0))
    return -u * h0 + L_Lambda(params, h0, h1)


def g_rate_dp(params: ModelParams, u: float, n: int = 200, difference: bool = True) -> float:
    """Finite-n counterpart of g(u) from P(G_n = floor(u n^2), V_n = 0).

    With `difference`, returns (log P_{2n} - log P_n) / n, which removes the
    constant part of the polynomial prefactor; otherwise (1/n) log P_n.
    """
    if not u > 0.0 or n < 1:
        raise DomainError(f"need u > 0 and n >= 1 (got u={u}, n={n})")
    log_p = area_log_probability(n, int(math.floor(u * n * n)), params)
    if not difference:
        return log_p / n
    log_p2 = area_log_probability(2 * n, int(math.floor(u * 4 * n * n)), params)
    return (log_p2 - log_p) / n


def wulff_objective(params: ModelParams, a: float, form: str = "rate") -> float:
    """a log Gamma + a g(1/a^2), or the same written as a log Gamma - h~0/a + a L_Lambda."""
    u = 1.0 / (a * a)
    if form == "rate":
        return a * params.log_gamma + a * g_rate(params, u)
    if form == "expanded":
        h0, h1 = invert_grad(params, (u, 0.0))
        return a * params.log_gamma - h0 / a + a * L_Lambda(params, h0, h1)
    raise ValueError(f"unknown objective form {form!r}")


def _objective_or_floor(params: ModelParams, a: float) -> float:
    try:
        return wulff_objective(params, a)
    except ConvergenceError:
        return -math.inf


def a_beta(params: ModelParams) -> float:
    """argmax over a of a log Gamma + a g(1/a^2) (collapsed phase only)."""
    if params.log_gamma >= 0.0:
        raise DomainError(f"a_beta needs beta > beta_c (got beta = {params.beta})")
    grid = np.geomspace(A_SCAN_LOW, A_SCAN_HIGH, A_SCAN_POINTS)
    values = np.array([_objective_or_floor(params, a) for a in grid])
    best = int(np.argmax(values))
    if not math.isfinite(values[best]):
        raise ConvergenceError("objective not finite anywhere on the scan grid")
    lo = grid[max(best - 1, 0)]
    hi = grid[min(best + 1, grid.size - 1)]
    res = minimize_scalar(
        lambda a: -_objective_or_floor(params, a),
        bounds=(lo, hi),
        method="bounded",
        options={"xatol": A_XTOL},
    )
    logger.debug("a_beta scan best %.6g, refined %.10g", grid[best], res.x)
    return float(res.x)


def star_area(params: ModelParams, h0: float) -> float:
    """int_0^1 gamma*(s) ds = int_0^1 (1 - x) L'((1/2 - x) h0) dx."""
    return _integrate(lambda x: (1.0 - x) * cumulant_derivative(params, (0.5 - x) * h0, 1))


@dataclass(frozen=True)
class WulffData:
    """Extension constant, h~0 at u = 1/a^2, and gamma_beta sampled on [0, a_beta]."""

    params: ModelParams
    a_beta: float
    htilde0: float
    s: np.ndarray = field(repr=False)
    curve: np.ndarray = field(repr=False)
    star: np.ndarray = field(repr=False)

    @property
    def beta(self) -> float:
        return self.params.beta

    def htilde0_at(self, u: float) -> float:
        return invert_grad(self.params, (u, 0.0))[0]

    def evaluate(self, s: np.ndarray) -> np.ndarray:
        """gamma_beta at arbitrary points, 0 outside [0, a_beta]."""
        return np.interp(s, self.s, self.curve, left=0.0, right=0.0)

    @property
    def area(self) -> float:
        return float(simpson(self.curve, x=self.s))

    @property
    def peak(self) -> float:
        return float(self.curve.max())


def wulff_curve(params: ModelParams, grid: int = 200) -> WulffData:
    """gamma*(s) = int_0^s L'((1/2 - x) h~0) dx on a uniform grid, then gamma(s) = a gamma*(s/a)."""
    if grid <= 0:
        raise DomainError(f"grid must be positive, got {grid}")
    a = a_beta(params)
    h0, _ = invert_grad(params, (1.0 / (a * a), 0.0))
    knots = np.linspace(0.0, 1.0, grid + 1)
    pieces = [
        _integrate(lambda x: cumulant_derivative(params, (0.5 - x) * h0, 1), lo, hi)
        for lo, hi in zip(knots[:-1], knots[1:])
    ]
    star = np.concatenate(([0.0], np.cumsum(pieces)))
    return WulffData(params, a, h0, a * knots, a * star, star)
