"""Exact and Markov-chain sampling of configurations under the Gibbs law e^{beta H} / Z_L."""

from __future__ import annotations

import logging
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Optional

import numpy as np
from scipy.special import logsumexp

from .constants import ENSEMBLE_MAGIC, EXACT_SAMPLER_MAX_L
from .errors import BudgetExceededError, DomainError, InvalidConfigurationError, RunConfigError
from .model import StretchConfig, enumerate_configs, from_walk, hamiltonian, wedge
from .partition import WalkTable, extension_log_weights, walk_table
from .util import child_seeds, inverse_cdf_draw, make_rng
from .walk import ModelParams, WalkPath, make_params

logger = logging.getLogger(__name__)

KINDS = ("exact", "mcmc")


@dataclass
class Ensemble:
    """Sampled configurations with everything needed to reproduce them."""

    beta: float
    length: int
    seed: int
    kind: str
    configs: list[StretchConfig] = field(default_factory=list)
    burn_in: Optional[int] = None
    thin: Optional[int] = None

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise RunConfigError(f"unknown sampler kind {self.kind!r} (expected exact or mcmc)")

    def __len__(self) -> int:
        return len(self.configs)

    def header(self) -> str:
        return f"{ENSEMBLE_MAGIC} beta={self.beta!r} L={self.length} seed={self.seed} kind={self.kind}"

    def to_text(self, extra_comments: Iterable[str] = ()) -> str:
        lines = [self.header()]
        if self.kind == "mcmc":
            lines.append(f"# burn_in={self.burn_in} thin={self.thin}")
        lines.extend(f"# {c}" for c in extra_comments)
        lines.extend(str(cfg) for cfg in self.configs)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Ensemble":
        lines = text.splitlines()
        if not lines or not lines[0].startswith(ENSEMBLE_MAGIC):
            raise InvalidConfigurationError("not an ipdsaw ensemble file (bad header)")
        fields = dict(tok.split("=", 1) for tok in lines[0][len(ENSEMBLE_MAGIC) :].split())
        try:
            ens = cls(
                beta=float(fields["beta"]),
                length=int(fields["L"]),
                seed=int(fields["seed"]),
                kind=fields["kind"],
            )
        except KeyError as e:
            raise InvalidConfigurationError(f"ensemble header missing {e}") from None
        for line in lines[1:]:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                for tok in line[1:].split():
                    if tok.startswith("burn_in="):
                        ens.burn_in = int(tok.split("=", 1)[1])
                    elif tok.startswith("thin="):
                        ens.thin = int(tok.split("=", 1)[1])
                continue
            nums = [int(t) for t in line.split()]
            if len(nums) != nums[0] + 1:
                raise InvalidConfigurationError(f"extension {nums[0]} does not match line {line!r}")
            ens.configs.append(StretchConfig(tuple(nums[1:]), ens.length))
        return ens


# --- exact sampling --------------------------------------------------------------


def extension_law(length: int, params: ModelParams) -> np.ndarray:
    """P(N = k) for k = 1..L (index k - 1)."""
    logw = extension_log_weights(length, params)
    return np.exp(logw - logsumexp(logw))


@lru_cache(maxsize=8)
def _cached_table(length: int, beta: float) -> WalkTable:
    return walk_table(length, make_params(beta))


def sample_exact(
    length: int,
    params: ModelParams,
    rng: np.random.Generator,
    table: Optional[WalkTable] = None,
) -> StretchConfig:
    """Gibbs-distributed configuration via the walk representation.

    Walks forward from (budget L, value 0), choosing each next value w with
    probability proportional to p(w - v) R(budget - 1 - |w|, w). This draws the
    extension and the conditioned walk jointly.
    """
    if length > EXACT_SAMPLER_MAX_L:
        raise BudgetExceededError(f"exact sampler limited to L <= {EXACT_SAMPLER_MAX_L} (got {length})")
    if table is None:
        table = _cached_table(length, params.beta)
    elif table.max_length < length or table.positive:
        raise BudgetExceededError(f"walk table of length {table.max_length} cannot serve L = {length}")
    values = [0]
    budget, value = length, 0
    while budget > 0:
        ws, logw = table.log_step_weights(budget, value)
        w = np.exp(logw - logw.max())
        value = int(ws[inverse_cdf_draw(w, rng.random())])
        values.append(value)
        budget -= 1 + abs(value)
    values.append(0)
    return from_walk(WalkPath(tuple(values)))


def _exact_stream(length: int, beta: float, count: int, seed: int) -> list[StretchConfig]:
    rng = make_rng(seed)
    params = make_params(beta)
    table = _cached_table(length, beta)
    return [sample_exact(length, params, rng, table) for _ in range(count)]


# --- Markov chain ------------------------------------------------------------------

_TRANSFER, _FLIP, _DELETE, _INSERT = range(4)


def _toward_zero(v: int) -> int:
    return v - 1 if v > 0 else v + 1


def _away_from_zero(v: int, sign_u: float) -> tuple[int, float]:
    """Grow |v| by one; a zero picks its sign from sign_u with proposal weight 1/2."""
    if v > 0:
        return v + 1, 1.0
    if v < 0:
        return v - 1, 1.0
    return (1 if sign_u < 0.5 else -1), 0.5


def _local_h(st: list[int], idx: Iterable[int]) -> int:
    n = len(st)
    return sum(wedge(st[k], st[k + 1]) for k in set(idx) if 0 <= k < n - 1)


class StretchChain:
    """Metropolis-Hastings chain on configurations of fixed length.

    Moves: transfer a unit of magnitude between two stretches; flip a sign;
    delete a zero stretch and give its unit to another stretch; the inverse
    insertion. Each proposal is paired with its reverse and the acceptance
    includes the proposal ratio, so the Gibbs law is invariant.
    """

    def __init__(self, length: int, params: ModelParams, rng: np.random.Generator, start: Optional[StretchConfig] = None) -> None:
        if length < 1:
            raise InvalidConfigurationError(f"length must be positive, got {length}")
        if start is not None and start.length != length:
            raise InvalidConfigurationError(f"start config has length {start.length}, expected {length}")
        self.length = length
        self.beta = params.beta
        self.rng = rng
        self.state: list[int] = list(start.stretches) if start is not None else [0] * length
        self.energy = hamiltonian(StretchConfig(tuple(self.state), length))
        self.attempts = 0
        self.accepted = 0
        self._buf = np.empty(0)
        self._pos = 0

    def _u(self) -> float:
        if self._pos >= self._buf.size:
            self._buf = self.rng.random(4096)
            self._pos = 0
        val = float(self._buf[self._pos])
        self._pos += 1
        return val

    def _pick(self, n: int) -> int:
        return min(int(self._u() * n), n - 1)

    def _accept(self, delta_h: int, ratio: float) -> bool:
        a = math.exp(self.beta * delta_h) * ratio if delta_h < 700 else math.inf
        return a >= 1.0 or self._u() < a

    def step(self) -> bool:
        """One proposal; returns True if accepted."""
        self.attempts += 1
        move = self._pick(4)
        st = self.state
        n = len(st)
        if move == _TRANSFER:
            if n < 2:
                return False
            i = self._pick(n)
            j = self._pick(n - 1)
            if j >= i:
                j += 1
            if st[i] == 0:
                return False
            old_i, old_j = st[i], st[j]
            new_i = _toward_zero(old_i)
            new_j, fwd = _away_from_zero(old_j, self._u())
            rev = 0.5 if new_i == 0 else 1.0
            ks = (i - 1, i, j - 1, j)
            before = _local_h(st, ks)
            st[i], st[j] = new_i, new_j
            dh = _local_h(st, ks) - before
            if self._accept(dh, rev / fwd):
                self.energy += dh
                self.accepted += 1
                return True
            st[i], st[j] = old_i, old_j
            return False
        if move == _FLIP:
            i = self._pick(n)
            if st[i] == 0:
                return False
            ks = (i - 1, i)
            before = _local_h(st, ks)
            st[i] = -st[i]
            dh = _local_h(st, ks) - before
            if self._accept(dh, 1.0):
                self.energy += dh
                self.accepted += 1
                return True
            st[i] = -st[i]
            return False
        if move == _DELETE:
            if n < 2:
                return False
            i = self._pick(n)
            j = self._pick(n - 1)
            if st[i] != 0:
                return False
            # a zero stretch has no wedges; removing it joins its neighbours
            joined = wedge(st[i - 1], st[i + 1]) if 0 < i < n - 1 else 0
            st.pop(i)
            old_j = st[j]
            new_j, fwd = _away_from_zero(old_j, self._u())
            ks = (j - 1, j)
            before = _local_h(st, ks)
            st[j] = new_j
            dh = joined + _local_h(st, ks) - before
            if self._accept(dh, 1.0 / fwd):
                self.energy += dh
                self.accepted += 1
                return True
            st[j] = old_j
            st.insert(i, 0)
            return False
        # insert
        slot = self._pick(n + 1)
        j = self._pick(n)
        if st[j] == 0:
            return False
        old_j = st[j]
        ks = (j - 1, j)
        before = _local_h(st, ks)
        st[j] = _toward_zero(old_j)
        rev = 0.5 if st[j] == 0 else 1.0
        dh = _local_h(st, ks) - before
        split = wedge(st[slot - 1], st[slot]) if 0 < slot < n else 0
        dh -= split
        if self._accept(dh, rev):
            st.insert(slot, 0)
            self.energy += dh
            self.accepted += 1
            return True
        st[j] = old_j
        return False

    def config(self) -> StretchConfig:
        return StretchConfig(tuple(self.state), self.length)

    @property
    def acceptance_rate(self) -> float:
        return self.accepted / self.attempts if self.attempts else 0.0


def sample_mcmc(
    length: int,
    params: ModelParams,
    rng: np.random.Generator,
    steps: int,
    burn_in: int,
    thin: int,
    seed: int = 0,
    start: Optional[StretchConfig] = None,
) -> Ensemble:
    """Run burn_in proposals, then keep every thin-th state over `steps` proposals."""
    if length < 2:
        raise DomainError(f"chain sampling needs L >= 2 (got {length})")
    if steps < 0 or burn_in < 0 or thin < 1:
        raise RunConfigError(f"invalid chain parameters steps={steps} burn_in={burn_in} thin={thin}")
    chain = StretchChain(length, params, rng, start)
    for _ in range(burn_in):
        chain.step()
    ens = Ensemble(params.beta, length, seed, "mcmc", burn_in=burn_in, thin=thin)
    for t in range(1, steps + 1):
        chain.step()
        if t % thin == 0:
            ens.configs.append(chain.config())
    logger.info("chain L=%d beta=%g acceptance %.3f", length, params.beta, chain.acceptance_rate)
    return ens


def _mcmc_stream(length: int, beta: float, count: int, seed: int, burn_in: int, thin: int) -> list[StretchConfig]:
    ens = sample_mcmc(length, make_params(beta), make_rng(seed), count * thin, burn_in, thin, seed)
    return ens.configs


def sample_ensemble(
    length: int,
    beta: float,
    count: int,
    seed: int,
    kind: str = "exact",
    burn_in: int = 0,
    thin: int = 1,
    workers: int = 1,
) -> Ensemble:
    """`count` configurations from `workers` independent streams, merged in stream order."""
    if count < 0:
        raise RunConfigError(f"sample count must be >= 0 (got {count})")
    if kind not in KINDS:
        raise RunConfigError(f"unknown sampler kind {kind!r} (expected exact or mcmc)")
    ens = Ensemble(beta, length, seed, kind, burn_in=burn_in if kind == "mcmc" else None, thin=thin if kind == "mcmc" else None)
    if workers <= 1:
        seeds = [seed]
        shares = [count]
    else:
        seeds = child_seeds(seed, workers)
        shares = [count // workers + (1 if k < count % workers else 0) for k in range(workers)]
    if kind == "exact":
        jobs = [(_exact_stream, (length, beta, c, s)) for c, s in zip(shares, seeds)]
    else:
        jobs = [(_mcmc_stream, (length, beta, c, s, burn_in, thin)) for c, s in zip(shares, seeds)]
    if workers <= 1:
        for fn, args in jobs:
            ens.configs.extend(fn(*args))
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(fn, *args) for fn, args in jobs]
            for fut in futures:
                ens.configs.extend(fut.result())
    return ens


# --- oracles -------------------------------------------------------------------------


def gibbs_law(length: int, beta: float) -> dict[tuple[int, ...], float]:
    """Enumerated Gibbs probabilities keyed by stretch tuple."""
    weights = {cfg.stretches: math.exp(beta * hamiltonian(cfg)) for cfg in enumerate_configs(length)}
    total = math.fsum(weights.values())
    return {k: w / total for k, w in weights.items()}


def empirical_law(configs: Iterable[StretchConfig]) -> dict[tuple[int, ...], float]:
    counts = Counter(cfg.stretches for cfg in configs)
    total = sum(counts.values())
    return {k: c / total for k, c in counts.items()}


def total_variation(p: dict, q: dict) -> float:
    keys = set(p) | set(q)
    return 0.5 * math.fsum(abs(p.get(k, 0.0) - q.get(k, 0.0)) for k in keys)
