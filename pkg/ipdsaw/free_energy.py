"""Critical point, excess free energy, tilted transfer operator, critical constants."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq
from scipy.special import gamma as gamma_fn

from .constants import (
    CRITICAL_RESIDUAL,
    CRITICAL_XTOL,
    EIGEN_TOL,
    FREE_ENERGY_XTOL,
    LOG_MU_PD,
    RAYLEIGH_TOL,
)
from .errors import ConvergenceError, DomainError
from .walk import ModelParams, laplace_convolve, make_params

logger = logging.getLogger(__name__)

MAX_POWER_ITERATIONS = 500_000
MAX_TRUNCATION_DOUBLINGS = 12


def gamma_beta(beta: float) -> float:
    """Gamma_beta = c_beta e^{-beta} for beta > 0."""
    return make_params(beta).gamma_beta


def critical_beta() -> float:
    """Unique root of Gamma_beta = 1."""
    beta_c = brentq(lambda b: gamma_beta(b) - 1.0, 1.0, 1.5, xtol=CRITICAL_XTOL, rtol=4 * np.finfo(float).eps)
    residual = abs(gamma_beta(beta_c) - 1.0)
    if residual > CRITICAL_RESIDUAL:
        raise ConvergenceError("critical point residual too large", (beta_c, residual))
    return float(beta_c)


def critical_beta_algebraic() -> float:
    """-2 log x* with x* the real root of x^3 + x^2 + x = 1."""
    x_star = brentq(lambda x: x**3 + x**2 + x - 1.0, 0.0, 1.0, xtol=1e-16, rtol=4 * np.finfo(float).eps)
    return -2.0 * math.log(x_star)


# --- transfer operator ---------------------------------------------------------


def _top_eigenvalue(params: ModelParams, delta: float, width: int, start: Optional[np.ndarray]) -> tuple[float, np.ndarray]:
    """Power iteration on D^{1/2} P D^{1/2}, D = diag(e^{-delta |v|}), |v| <= width."""
    v = np.arange(-width, width + 1)
    half = np.exp(-0.5 * delta * np.abs(v))
    if start is None:
        vec = half.copy()
    else:
        vec = start
    vec = vec / np.linalg.norm(vec)
    prev = -1.0
    for it in range(1, MAX_POWER_ITERATIONS + 1):
        w = half * laplace_convolve(half * vec, params.x) / params.c_beta
        rq = float(vec @ w)
        norm = float(np.linalg.norm(w))
        vec = w / norm
        if abs(rq - prev) < RAYLEIGH_TOL:
            logger.debug("power iteration converged in %d steps (width %d, lambda %.15g)", it, width, rq)
            return rq, vec
        prev = rq
    raise ConvergenceError(f"power iteration did not converge at width {width}", (prev, rq))


def _pad(vec: np.ndarray, width: int) -> np.ndarray:
    old = (vec.size - 1) // 2
    out = np.zeros(2 * width + 1)
    out[width - old : width + old + 1] = vec
    return out


@dataclass(frozen=True)
class TransferResult:
    """log of the top eigenvalue and the change across the last truncation doubling."""

    value: float
    error_band: float
    width: int


def h_beta_detailed(params: ModelParams, delta: float) -> TransferResult:
    """h_beta(delta) with the error band of the last truncation doubling."""
    if delta < 0.0:
        raise DomainError(f"delta must be >= 0, got {delta}")
    if delta == 0.0:
        return TransferResult(0.0, 0.0, 0)
    width = 8 * math.ceil(delta ** (-2.0 / 3.0))
    lam, vec = _top_eigenvalue(params, delta, width, None)
    history = [lam]
    for _ in range(MAX_TRUNCATION_DOUBLINGS):
        width *= 2
        lam_new, vec = _top_eigenvalue(params, delta, width, _pad(vec, width))
        history.append(lam_new)
        change = abs(lam_new - lam)
        logger.debug("delta=%.3g width=%d lambda=%.15g change=%.3g", delta, width, lam_new, change)
        lam = lam_new
        if change < EIGEN_TOL:
            return TransferResult(math.log(lam), change / lam, width)
    raise ConvergenceError(f"truncation growth did not converge for delta={delta}", history[-2:])


def h_beta(params: ModelParams, delta: float) -> float:
    """lim (1/N) log E[exp(-delta G_N)], as log of the top eigenvalue of the tilted kernel."""
    return h_beta_detailed(params, delta).value


def excess_free_energy(params: ModelParams) -> float:
    """Root of log Gamma - delta + h(delta) = 0 below the critical point, 0 at and above it."""
    log_g = params.log_gamma
    if log_g <= 0.0:
        return 0.0

    def root_map(delta: float) -> float:
        return log_g - delta + h_beta(params, delta)

    return float(brentq(root_map, 0.0, log_g, xtol=FREE_ENERGY_XTOL))


def free_energy(beta: float) -> float:
    """f(beta) = beta + f~(beta); beta = 0 gives the connective constant log(1 + sqrt 2)."""
    if beta == 0.0:
        return LOG_MU_PD
    return beta + excess_free_energy(make_params(beta))


def free_energy_table(betas: Iterable[float]) -> list[tuple[float, float, float]]:
    """Rows (beta, f~, f)."""
    rows = []
    for beta in betas:
        if beta < 0.0:
            raise DomainError(f"beta must be >= 0, got {beta}")
        f = free_energy(beta)
        rows.append((float(beta), f - beta, f))
    return rows


# --- Airy ----------------------------------------------------------------------

_AI0 = 1.0 / (3.0 ** (2.0 / 3.0) * gamma_fn(2.0 / 3.0))
_AIP0 = -1.0 / (3.0 ** (1.0 / 3.0) * gamma_fn(1.0 / 3.0))


def _airy_coefficients(tol: float = 1e-20, radius: float = 2.0) -> list[float]:
    """Maclaurin coefficients of Ai, cut once a_n radius^n stays below tol for three terms."""
    coef = [_AI0, _AIP0, 0.0]
    small = 0
    n = 0
    while small < 3:
        coef.append(coef[n] / ((n + 3) * (n + 2)))
        n += 1
        small = small + 1 if abs(coef[-1]) * radius ** len(coef) < tol else 0
    return coef


_AIRY_COEF = _airy_coefficients()


def airy_prime(x: float) -> float:
    """Ai'(x) from the Maclaurin series, accurate on [-2, 2]."""
    return math.fsum(n * a * x ** (n - 1) for n, a in enumerate(_AIRY_COEF) if n > 0)


def airy(x: float) -> float:
    return math.fsum(a * x**n for n, a in enumerate(_AIRY_COEF))


def airy_prime_first_zero() -> float:
    """|a'_1|: the zero of Ai' closest to the origin."""
    root = brentq(airy_prime, -1.1, -0.9, xtol=1e-15, rtol=4 * np.finfo(float).eps)
    return float(-root)


def airy_prime_first_zero_ode() -> float:
    """Same constant by integrating y'' = x y from the series initial data."""

    def rhs(x: float, y: np.ndarray) -> list[float]:
        return [y[1], x * y[0]]

    def hit(x: float, y: np.ndarray) -> float:
        return y[1]

    hit.terminal = True  # type: ignore[attr-defined]
    sol = solve_ivp(rhs, (0.0, -2.0), [_AI0, _AIP0], events=hit, rtol=1e-12, atol=1e-14)
    if not sol.t_events[0].size:
        raise ConvergenceError("no zero of Ai' found on [-2, 0]")
    return float(-sol.t_events[0][0])


# --- critical constants --------------------------------------------------------


@dataclass(frozen=True)
class CriticalConstants:
    """beta_c, slope c, area constant d, |a'_1|, amplitude (c/d)^{3/2} and checks."""

    beta_c: float
    c: float
    d: float
    airy_prime_zero: float
    amplitude: float
    sigma2: float
    gamma_residual: float
    slope_residual: float


def log_gamma_slope(beta: float, step: float = 1e-5) -> float:
    """-(d/d beta) log Gamma_beta by central differences."""
    return -(math.log(gamma_beta(beta + step)) - math.log(gamma_beta(beta - step))) / (2.0 * step)


def critical_amplitude() -> CriticalConstants:
    beta_c = critical_beta()
    params = make_params(beta_c)
    x = params.x
    c = 1.0 + x / (1.0 - x * x)
    ap = airy_prime_first_zero()
    d = 2.0 ** (-1.0 / 3.0) * ap * params.sigma2_beta ** (1.0 / 3.0)
    return CriticalConstants(
        beta_c=beta_c,
        c=c,
        d=d,
        airy_prime_zero=ap,
        amplitude=(c / d) ** 1.5,
        sigma2=params.sigma2_beta,
        gamma_residual=abs(params.gamma_beta - 1.0),
        slope_residual=abs(log_gamma_slope(beta_c) - c),
    )


def amplitude_ratios(epsilons: Iterable[float]) -> list[tuple[float, float]]:
    """(eps, f~(beta_c - eps) / eps^{3/2}) pairs."""
    beta_c = critical_beta()
    out = []
    for eps in epsilons:
        ft = excess_free_energy(make_params(beta_c - eps))
        out.append((float(eps), ft / eps**1.5))
    return out
