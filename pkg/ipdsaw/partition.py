"""Partition functions: brute force, stretch-magnitude DP, and the random-walk tables.

Three independent engines compute Z_L:

* brute force over every stretch vector (exact integer histogram of H);
* a DP over (remaining budget, previous magnitude) run in log space;
* the walk representation Z~_L = Z_L e^{-beta L} / c_beta built from a
  backward table over (remaining budget, current value).
"""

from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.special import logsumexp

from .constants import BRUTE_FORCE_MAX_L, DP_MAX_L, PATTERN_TAIL, WALK_MAX_L
from .errors import BudgetExceededError, DomainError
from .model import enumerate_configs, hamiltonian
from .util import safe_exp
from .walk import ModelParams, laplace_convolve, make_params

logger = logging.getLogger(__name__)


# --- brute force -------------------------------------------------------------


def hamiltonian_histogram(length: int) -> dict[int, int]:
    """Exact number of configurations of each energy H (coefficients of e^{beta H})."""
    if length > BRUTE_FORCE_MAX_L:
        raise BudgetExceededError(f"brute force limited to L <= {BRUTE_FORCE_MAX_L} (got {length})")
    return dict(sorted(Counter(hamiltonian(cfg) for cfg in enumerate_configs(length)).items()))


def brute_force_Z(length: int, beta: float) -> float:
    """Sum of e^{beta H} over all configurations of the given length."""
    hist = hamiltonian_histogram(length)
    return math.fsum(count * math.exp(beta * h) for h, count in hist.items())


# --- stretch-magnitude DP ----------------------------------------------------


def _magnitude_table(length: int, beta: float, zero_stretch: bool, same_sign: bool) -> np.ndarray:
    """log T[r, m]: weighted number of ways to spend budget r after a stretch of magnitude m.

    Each stretch of magnitude k costs k+1. A nonzero stretch opposite to its
    predecessor gains e^{beta min(m, k)}; a same-signed one gains nothing and is
    allowed only when `same_sign`; zero stretches only when `zero_stretch`.
    The sum over k splits into a prefix (k <= m, weight e^{beta k}) and a
    suffix (k > m, weight e^{beta m}), so each row costs O(L).
    """
    if length > DP_MAX_L:
        raise BudgetExceededError(f"DP limited to L <= {DP_MAX_L} (got {length})")
    size = length + 1
    table = np.full((size, size), -np.inf)
    table[0, :] = 0.0
    m = np.arange(size)
    with np.errstate(divide="ignore", invalid="ignore"):
        for r in range(1, size):
            k = np.arange(r)
            g = table[r - 1 - k, k]
            base = g[0] if zero_stretch else -np.inf
            opposite = np.full(size, -np.inf)
            if r >= 2:
                g1 = g[1:]
                if same_sign:
                    base = np.logaddexp(base, logsumexp(g1))
                prefix_acc = np.logaddexp.accumulate(beta * k[1:] + g1)
                suffix_acc = np.logaddexp.accumulate(g1[::-1])[::-1]
                prefix = np.full(size, -np.inf)
                prefix[1:] = prefix_acc[np.minimum(m[1:], r - 1) - 1]
                suffix = np.full(size, -np.inf)
                suffix[: r - 1] = suffix_acc
                opposite = np.logaddexp(prefix, beta * m + suffix)
            table[r] = np.logaddexp(base, opposite)
    return table


def dp_log_Z_sequence(length: int, beta: float) -> np.ndarray:
    """log Z_1, ..., log Z_L from one DP pass."""
    table = _magnitude_table(length, float(beta), zero_stretch=True, same_sign=True)
    return table[1:, 0].copy()


def dp_log_Z(length: int, beta: float) -> float:
    return float(dp_log_Z_sequence(length, beta)[-1])


def dp_Z(length: int, beta: float) -> float:
    """Z_L by the magnitude DP (inf if it overflows a double; see dp_log_Z)."""
    return safe_exp(dp_log_Z(length, beta))


def one_bead_log_Z(length: int, beta: float) -> float:
    """log of the sum over configurations whose consecutive wedges are all nonzero."""
    if length == 1:
        return 0.0
    table = _magnitude_table(length - 1, float(beta), zero_stretch=False, same_sign=False)
    k = np.arange(1, length)
    return math.log(2.0) + float(logsumexp(table[length - 1 - k, k]))


def one_bead_Z(length: int, beta: float) -> float:
    """Z of one-bead configurations: single stretches and strictly alternating nonzero ones."""
    return safe_exp(one_bead_log_Z(length, beta))


# --- walk representation -----------------------------------------------------


@dataclass
class WalkTable:
    """Backward table R(c, v) stored as rows[c] * exp(scales[c]).

    R(c, v) is the excess weight of all completions from value v with budget c
    (one per step plus the area still to be spent). R(c, 0) = Z~_c, so a table
    for L serves every length up to L.
    """

    params: ModelParams
    max_length: int
    rows: np.ndarray
    scales: np.ndarray
    positive: bool = False

    @property
    def width(self) -> int:
        return self.max_length

    def log_R(self, budget: int, value: int) -> float:
        if abs(value) > self.width:
            return -math.inf
        r = self.rows[budget, value + self.width]
        return float(self.scales[budget] + math.log(r)) if r > 0 else -math.inf

    def log_Z(self, length: int) -> float:
        """log Z~_length."""
        if not 1 <= length <= self.max_length:
            raise BudgetExceededError(f"table covers lengths 1..{self.max_length} (got {length})")
        return self.log_R(length, 0)

    def log_step_weights(self, budget: int, value: int) -> tuple[np.ndarray, np.ndarray]:
        """Candidate next values w and log weights p(w - v) R(budget - 1 - |w|, w)."""
        ws = np.arange(-(budget - 1), budget)
        src = budget - 1 - np.abs(ws)
        with np.errstate(divide="ignore"):
            logw = (
                -0.5 * self.params.beta * np.abs(ws - value)
                + np.log(self.rows[src, ws + self.width])
                + self.scales[src]
            )
        return ws, logw


def _backward_table(length: int, params: ModelParams, positive: bool) -> WalkTable:
    if length > WALK_MAX_L:
        raise BudgetExceededError(f"walk tables limited to L <= {WALK_MAX_L} (got {length})")
    width = length
    vals = np.arange(-width, width + 1)
    x = params.x
    rows = np.zeros((length + 1, 2 * width + 1))
    scales = np.full(length + 1, -np.inf)
    rows[0] = np.exp(-0.5 * params.beta * np.abs(vals))
    if positive:
        rows[0, vals <= 0] = 0.0
    scales[0] = -math.log(params.c_beta)
    log_step = math.log(params.gamma_beta / params.c_beta)
    for c in range(1, length + 1):
        ws = np.arange(-(c - 1), c)
        if positive:
            ws = ws[ws > 0]
        if ws.size == 0:
            continue
        src = c - 1 - np.abs(ws)
        logs = scales[src]
        t = float(logs.max())
        if t == -math.inf:
            continue
        s = np.zeros(2 * width + 1)
        s[ws + width] = rows[src, ws + width] * np.exp(logs - t)
        b = laplace_convolve(s, x)
        peak = float(b.max())
        if peak <= 0.0:
            continue
        rows[c] = b / peak
        scales[c] = t + log_step + math.log(peak)
    return WalkTable(params, length, rows, scales, positive)


def walk_table(length: int, params: ModelParams) -> WalkTable:
    """Backward table for Z~ and for exact sampling, O(L^2) time and memory."""
    return _backward_table(length, params, positive=False)


def walk_repr_log_Z(length: int, params: ModelParams) -> float:
    return walk_table(length, params).log_Z(length)


def walk_repr_Z(length: int, params: ModelParams) -> float:
    """Z~_L = sum_N Gamma^N P(V_0 = V_{N+1} = 0, G_N = L - N)."""
    return safe_exp(walk_repr_log_Z(length, params))


def walk_repr_log_Z_sequence(length: int, params: ModelParams) -> np.ndarray:
    """log Z~_1, ..., log Z~_L from a single table."""
    table = walk_table(length, params)
    return np.array([table.log_Z(n) for n in range(1, length + 1)])


def extension_log_weights(length: int, params: ModelParams) -> np.ndarray:
    """log of Gamma^N P(V_0 = V_{N+1} = 0, G_N = L - N) for N = 1..L.

    Layered forward DP: layer n holds the weight of walks with n interior
    values by (consumed budget c in [n, L], value |v| <= L - n). Entries carry
    a discount e^{-rho c} with rho = log Z~_L / L and each layer is renormalized.
    """
    if length > WALK_MAX_L:
        raise BudgetExceededError(f"walk tables limited to L <= {WALK_MAX_L} (got {length})")
    beta = params.beta
    rho = walk_repr_log_Z(length, params) / length
    log_gc = math.log(params.gamma_beta / params.c_beta)
    log_c = math.log(params.c_beta)
    out = np.full(length, -np.inf)

    span = length - 1
    u = np.arange(-span, span + 1)
    block = np.zeros((length, u.size))
    block[np.abs(u), u + span] = np.exp(-0.5 * beta * np.abs(u) - rho * (1 + np.abs(u)))
    peak = block.max()
    block /= peak
    log_scale = log_gc + math.log(peak)

    with np.errstate(divide="ignore"):
        for n in range(1, length + 1):
            span = length - n
            u = np.arange(-span, span + 1)
            final = block[-1]
            if final.any():
                out[n - 1] = (
                    log_scale + rho * length + logsumexp(np.log(final) - 0.5 * beta * np.abs(u) - log_c)
                )
            k = span - 1
            if k < 0:
                break
            conv = laplace_convolve(block, params.x, axis=1)
            cs = np.arange(n + 1, length + 1)[:, None]
            vs = np.arange(-k, k + 1)[None, :]
            src = cs - 1 - np.abs(vs) - n
            valid = src >= 0
            gathered = conv[np.where(valid, src, 0), vs + span]
            nxt = np.where(valid, gathered, 0.0) * np.exp(-rho * (1 + np.abs(vs)))
            peak = nxt.max()
            if peak <= 0.0:
                break
            block = nxt / peak
            log_scale += log_gc + math.log(peak)
    return out


def one_bead_walk_log_Z(length: int, params: ModelParams) -> float:
    """log Z-one-bead through positive excursions: Z = 2 c e^{beta L} sum_N Gamma^N P(V+)."""
    if length == 1:
        return 0.0
    table = _backward_table(length, params, positive=True)
    return math.log(2.0 * params.c_beta) + params.beta * length + table.log_R(length, 0)


def one_bead_walk_Z(length: int, params: ModelParams) -> float:
    return safe_exp(one_bead_walk_log_Z(length, params))


# --- patterns -----------------------------------------------------------------


def one_pattern_log_Z_sequence(length: int, params: ModelParams) -> np.ndarray:
    """log Z^_1, ..., log Z^_L where Z^_n = e^{-beta n} sum over one-pattern configs of e^{beta H}.

    A one-pattern configuration has nonzero stretches followed by a single
    final zero stretch; (0) is the only one of size 1.
    """
    table = _magnitude_table(max(length - 1, 1), params.beta, zero_stretch=False, same_sign=True)
    free = table[: length, 0]
    n = np.arange(1, length + 1)
    return free - params.beta * n


def one_pattern_Z(length: int, params: ModelParams) -> float:
    return safe_exp(float(one_pattern_log_Z_sequence(length, params)[-1]))


@dataclass(frozen=True)
class PatternLaw:
    """K(n) = Z^_n e^{-f~ n} for n = 1..len(K); `tail` is the last computed term."""

    beta: float
    excess_free_energy: float
    weights: np.ndarray = field(repr=False)

    @property
    def total(self) -> float:
        return math.fsum(self.weights)

    @property
    def tail(self) -> float:
        return float(self.weights[-1])

    def probabilities(self) -> np.ndarray:
        return self.weights / self.total


def pattern_law(params: ModelParams, ftilde: Optional[float] = None, n_max: int = 128) -> PatternLaw:
    """Pattern-size law, extended until terms fall below the tail threshold."""
    if ftilde is None:
        from .free_energy import excess_free_energy

        ftilde = excess_free_energy(params)
    n = n_max
    while True:
        logz = one_pattern_log_Z_sequence(n, params)
        k = np.exp(logz - ftilde * np.arange(1, n + 1))
        if k[-1] < PATTERN_TAIL or n >= DP_MAX_L:
            if k[-1] >= PATTERN_TAIL:
                logger.warning("pattern law truncated at n=%d with tail %.3g", n, k[-1])
            return PatternLaw(params.beta, float(ftilde), k)
        logger.debug("pattern law tail %.3g at n=%d, doubling", k[-1], n)
        n = min(2 * n, DP_MAX_L)


# --- tables -------------------------------------------------------------------


@dataclass(frozen=True)
class PartitionTable:
    """Exact partition values for one (L, beta) cell; excess fields need beta > 0."""

    length: int
    beta: float
    log_Z: float
    log_Z_one_bead: float
    log_Z_excess: Optional[float] = None
    log_Z_one_pattern: Optional[float] = None
    extension_weights: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def Z(self) -> float:
        return safe_exp(self.log_Z)

    @property
    def Z_one_bead(self) -> float:
        return safe_exp(self.log_Z_one_bead)

    @property
    def Z_excess(self) -> Optional[float]:
        return None if self.log_Z_excess is None else safe_exp(self.log_Z_excess)

    @property
    def Z_one_pattern(self) -> Optional[float]:
        return None if self.log_Z_one_pattern is None else safe_exp(self.log_Z_one_pattern)


def build_table(length: int, beta: float, with_extension: bool = True) -> PartitionTable:
    """Assemble every engine's output for one cell."""
    log_z = dp_log_Z(length, beta)
    log_bead = one_bead_log_Z(length, beta)
    if beta <= 0.0:
        return PartitionTable(length, float(beta), log_z, log_bead)
    params = make_params(beta)
    log_excess = walk_repr_log_Z(length, params)
    log_pattern = float(one_pattern_log_Z_sequence(length, params)[-1])
    weights = None
    if with_extension:
        weights = np.exp(extension_log_weights(length, params))
    return PartitionTable(length, float(beta), log_z, log_bead, log_excess, log_pattern, weights)


def require_positive_beta(beta: float) -> ModelParams:
    if beta <= 0.0:
        raise DomainError(f"excess quantities need beta > 0 (got {beta})")
    return make_params(beta)
