"""Auxiliary random walk with symmetric discrete-Laplace increments.

Increments k have probability exp(-(beta/2)|k|) / c_beta. A configuration of
extension N maps to a walk pinned at 0 at times 0 and N+1, hence N+1 increments.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
from scipy.signal import lfilter

from .constants import PMF_TAIL
from .errors import DomainError, InvalidWalkError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ModelParams:
    """beta and the derived scalars of the increment law."""

    beta: float
    c_beta: float
    gamma_beta: float
    sigma2_beta: float

    @property
    def x(self) -> float:
        """Geometric ratio exp(-beta/2)."""
        return math.exp(-self.beta / 2.0)

    @property
    def log_gamma(self) -> float:
        return math.log(self.gamma_beta)


@dataclass(frozen=True)
class WalkPath:
    """Walk values V_0, ..., V_M with V_0 = 0."""

    values: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.values or self.values[0] != 0:
            raise InvalidWalkError(f"walk must start at 0: {self.values}")

    @property
    def steps(self) -> int:
        return len(self.values) - 1

    def increments(self) -> tuple[int, ...]:
        v = self.values
        return tuple(v[i + 1] - v[i] for i in range(len(v) - 1))


class Excursion(NamedTuple):
    """One excursion between splitting times start < end, with its size X_r."""

    start: int
    end: int
    area: int


def make_params(beta: float) -> ModelParams:
    """Closed forms: c = (1+x)/(1-x), Gamma = c e^-beta, sigma^2 = 2x/(1-x)^2 with x = e^-beta/2."""
    beta = float(beta)
    if not beta > 0.0 or not math.isfinite(beta):
        raise DomainError(
            f"beta must be positive for the walk representation (got {beta}); "
            "use partition.dp_Z or brute_force_Z at beta = 0"
        )
    x = math.exp(-beta / 2.0)
    one_minus = -math.expm1(-beta / 2.0)
    c = (1.0 + x) / one_minus
    gamma = c * math.exp(-beta)
    sigma2 = 2.0 * x / (one_minus * one_minus)
    return ModelParams(beta=beta, c_beta=c, gamma_beta=gamma, sigma2_beta=sigma2)


def increment_pmf(params: ModelParams, k: int) -> float:
    """P(V_1 - V_0 = k)."""
    return math.exp(-0.5 * params.beta * abs(k)) / params.c_beta


def pmf_cutoff(params: ModelParams, tail: float = PMF_TAIL) -> int:
    """Smallest K with exp(-(beta/2) K) < tail."""
    return int(math.ceil(-2.0 * math.log(tail) / params.beta)) + 1


def pmf_sums(params: ModelParams) -> tuple[float, float]:
    """Truncated series (total mass, second moment) for cross-checking the closed forms."""
    k = np.arange(-pmf_cutoff(params), pmf_cutoff(params) + 1, dtype=float)
    w = np.exp(-0.5 * params.beta * np.abs(k)) / params.c_beta
    return math.fsum(w), math.fsum(w * k * k)


def _check_h(params: ModelParams, h: float) -> None:
    if not abs(h) < params.beta / 2.0:
        raise DomainError(f"|h| must be < beta/2 = {params.beta / 2.0} (got h = {h})")


def cumulant(params: ModelParams, h: float) -> float:
    """log E[exp(h V_1)] for |h| < beta/2."""
    _check_h(params, h)
    y = math.exp(h - params.beta / 2.0)
    z = math.exp(-h - params.beta / 2.0)
    mgf = (1.0 + y / (1.0 - y) + z / (1.0 - z)) / params.c_beta
    return math.log(mgf)


def cumulant_derivative(params: ModelParams, h: float, order: int = 1) -> float:
    """First or second derivative of the cumulant."""
    _check_h(params, h)
    y = math.exp(h - params.beta / 2.0)
    z = math.exp(-h - params.beta / 2.0)
    m0 = (1.0 + y / (1.0 - y) + z / (1.0 - z)) / params.c_beta
    m1 = (y / (1.0 - y) ** 2 - z / (1.0 - z) ** 2) / params.c_beta
    if order == 1:
        return m1 / m0
    if order == 2:
        m2 = (y * (1.0 + y) / (1.0 - y) ** 3 + z * (1.0 + z) / (1.0 - z) ** 3) / params.c_beta
        return m2 / m0 - (m1 / m0) ** 2
    raise ValueError(f"order must be 1 or 2, got {order}")


def sample_increment(params: ModelParams, rng: np.random.Generator) -> int:
    """Exact draw as the difference of two i.i.d. geometric variables."""
    p = 1.0 - params.x
    return int(rng.geometric(p)) - int(rng.geometric(p))


def sample_increments(params: ModelParams, rng: np.random.Generator, size: int) -> np.ndarray:
    """Vectorized sample_increment."""
    p = 1.0 - params.x
    return rng.geometric(p, size=size) - rng.geometric(p, size=size)


def sample_walk(n: int, params: ModelParams, rng: np.random.Generator) -> WalkPath:
    """Unconditioned walk with n increments."""
    inc = sample_increments(params, rng, n)
    return WalkPath(tuple(int(v) for v in np.concatenate(([0], np.cumsum(inc)))))


def walk_probability(walk: WalkPath, params: ModelParams) -> float:
    """Product of the increment probabilities along the walk."""
    inc = walk.increments()
    log_p = -0.5 * params.beta * sum(abs(k) for k in inc) - len(inc) * math.log(params.c_beta)
    return math.exp(log_p)


def geometric_area(walk: WalkPath, n: int | None = None) -> int:
    """G_n = |V_1| + ... + |V_n| (n defaults to the last index)."""
    v = walk.values
    if n is None:
        n = len(v) - 1
    return sum(abs(x) for x in v[1 : n + 1])


def is_positive_excursion(walk: WalkPath) -> bool:
    """V_0 = V_M = 0 and V_i > 0 strictly inside."""
    v = walk.values
    return len(v) >= 2 and v[-1] == 0 and all(x > 0 for x in v[1:-1])


def excursions(walk: WalkPath) -> list[Excursion]:
    """Split at tau with V_{tau-1} != 0 and V_{tau-1} V_tau <= 0; size = duration + area."""
    v = walk.values
    out: list[Excursion] = []
    prev = 0
    for i in range(1, len(v)):
        if v[i - 1] != 0 and v[i - 1] * v[i] <= 0:
            area = sum(abs(x) for x in v[prev:i])
            out.append(Excursion(prev, i, i - prev + area))
            prev = i
    return out


def laplace_convolve(values: np.ndarray, x: float, axis: int = -1) -> np.ndarray:
    """b_j = sum_i x^|i-j| a_i along `axis` in linear time (two first-order filters)."""
    a = np.asarray(values, dtype=float)
    fwd = lfilter([1.0], [1.0, -x], a, axis=axis)
    rev = np.flip(lfilter([1.0], [1.0, -x], np.flip(a, axis=axis), axis=axis), axis=axis)
    return fwd + rev - a


def finite_h(params: ModelParams, delta: float, n: int) -> float:
    """(1/n) log E[exp(-delta G_n)] for the free walk, by an exact value DP.

    Values are truncated at a width of many standard deviations of V_n.
    """
    if delta < 0:
        raise DomainError(f"delta must be >= 0, got {delta}")
    width = int(math.ceil(12.0 * math.sqrt(params.sigma2_beta * n))) + 50
    v = np.arange(-width, width + 1)
    damp = np.exp(-delta * np.abs(v))
    phi = np.zeros(v.size)
    phi[width] = 1.0
    log_total = 0.0
    for _ in range(n):
        phi = laplace_convolve(phi, params.x) / params.c_beta * damp
        s = phi.sum()
        log_total += math.log(s)
        phi /= s
    return log_total / n


def area_log_probability(n: int, area: int, params: ModelParams) -> float:
    """log P(G_n = area, V_n = 0) by a DP over (area so far, value).

    Values are truncated at 4*area/n + 50.
    """
    if n < 1 or area < 0:
        raise DomainError(f"need n >= 1 and area >= 0 (got n={n}, area={area})")
    width = int(4 * area / n) + 50
    nv = 2 * width + 1
    absv = np.abs(np.arange(-width, width + 1))
    logger.debug("area DP n=%d area=%d width=%d", n, area, width)
    table = np.zeros((area + 1, nv))
    table[0, width] = 1.0
    log_scale = 0.0
    for step in range(1, n + 1):
        conv = laplace_convolve(table, params.x, axis=1) / params.c_beta
        if step == n:
            # the final value must be 0 and adds nothing to the area
            table = np.zeros_like(table)
            table[:, width] = conv[:, width]
        else:
            table = np.zeros_like(table)
            for j in range(nv):
                s = absv[j]
                if s <= area:
                    table[s:, j] = conv[: area + 1 - s, j]
        total = table.sum()
        if total == 0.0:
            return -math.inf
        log_scale += math.log(total)
        table /= total
    p = table[area, width]
    if p <= 0.0:
        return -math.inf
    return log_scale + math.log(p)


def walk_from_values(values: Sequence[int]) -> WalkPath:
    return WalkPath(tuple(int(v) for v in values))
