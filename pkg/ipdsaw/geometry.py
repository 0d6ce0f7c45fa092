"""Ensemble estimators: extension, beads, patterns, rescaled profiles, exponent fits."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np
from scipy import stats

from .errors import EmptyEnsembleError, InvalidConfigurationError
from .model import (
    StretchConfig,
    beads,
    center_of_mass,
    hamiltonian,
    max_stretch,
    patterns,
    profile,
    rescale_at,
    to_walk,
    vertical_displacement,
)
from .sampler import Ensemble, total_variation
from .walk import excursions

Exponent = Union[int, float, Fraction]


def _configs(ens: Union[Ensemble, Sequence[StretchConfig]]) -> list[StretchConfig]:
    configs = list(ens.configs) if isinstance(ens, Ensemble) else list(ens)
    if not configs:
        raise EmptyEnsembleError("estimator called on an empty ensemble")
    return configs


@dataclass(frozen=True)
class Estimate:
    mean: float
    stderr: float

    @classmethod
    def of(cls, values: Sequence[float]) -> "Estimate":
        arr = np.asarray(values, dtype=float)
        if arr.size == 0:
            raise EmptyEnsembleError("no values to estimate from")
        if arr.size == 1:
            return cls(float(arr[0]), 0.0)
        return cls(float(arr.mean()), float(arr.std(ddof=1) / math.sqrt(arr.size)))


@dataclass(frozen=True)
class ExtensionStats:
    extension: Estimate
    per_sqrt_length: Estimate
    per_length: Estimate


def extension_stats(ens: Union[Ensemble, Sequence[StretchConfig]]) -> ExtensionStats:
    configs = _configs(ens)
    n = np.array([c.extension for c in configs], dtype=float)
    length = np.array([c.length for c in configs], dtype=float)
    return ExtensionStats(Estimate.of(n), Estimate.of(n / np.sqrt(length)), Estimate.of(n / length))


@dataclass(frozen=True)
class BeadStats:
    count: Estimate
    largest_fraction: Estimate
    thresholds: tuple[float, ...]
    exceed: tuple[float, ...]

    def exceedance(self, t: float) -> float:
        """Empirical P(I_max / L >= t) at one of the requested thresholds."""
        return self.exceed[self.thresholds.index(t)]


def bead_stats(ens: Union[Ensemble, Sequence[StretchConfig]], thresholds: Sequence[float] = (0.5, 0.9, 0.95)) -> BeadStats:
    configs = _configs(ens)
    counts = []
    fractions = []
    for cfg in configs:
        b = beads(cfg)
        counts.append(b.count)
        fractions.append(b.largest_size / cfg.length)
    frac = np.asarray(fractions)
    exceed = tuple(float(np.mean(frac >= t)) for t in thresholds)
    return BeadStats(Estimate.of(counts), Estimate.of(fractions), tuple(float(t) for t in thresholds), exceed)


@dataclass(frozen=True)
class PatternStats:
    per_length: Estimate
    size_law: dict[int, float]
    completed: int
    tv_to_reference: Optional[float] = None


def pattern_stats(
    ens: Union[Ensemble, Sequence[StretchConfig]],
    reference: Optional[np.ndarray] = None,
    first_only: bool = False,
) -> PatternStats:
    """Mean p(l)/L and the empirical law of completed pattern sizes.

    With first_only, only sigma_1 of each configuration enters the law. `reference`
    is K(1), K(2), ... and yields the total-variation distance to the empirical law.
    """
    configs = _configs(ens)
    per_length = []
    sizes: Counter[int] = Counter()
    for cfg in configs:
        p = patterns(cfg)
        per_length.append(p.count / cfg.length)
        sizes.update(p.sizes[:1] if first_only else p.sizes)
    total = sum(sizes.values())
    law = {n: c / total for n, c in sorted(sizes.items())} if total else {}
    tv = None
    if reference is not None and total:
        ref = np.asarray(reference, dtype=float)
        ref = ref / ref.sum()
        tv = total_variation(law, {n + 1: float(w) for n, w in enumerate(ref)})
    return PatternStats(Estimate.of(per_length), law, total, tv)


@dataclass(frozen=True)
class MeanProfile:
    """Pointwise means and standard errors of the rescaled profile and center of mass."""

    t: np.ndarray
    profile: np.ndarray
    profile_stderr: np.ndarray
    center_of_mass: np.ndarray
    center_of_mass_stderr: np.ndarray
    aligned: bool = True
    aligned_to: Optional[float] = None


def _align(cfg: StretchConfig) -> StretchConfig:
    return cfg.flipped() if vertical_displacement(cfg) < 0 else cfg


def _polygon(cfg: StretchConfig, t: np.ndarray, span: float, space_scale: float) -> tuple[np.ndarray, np.ndarray]:
    """Piecewise-linear reading of (M_i, |l_i|), i = 0..N+1, stretched onto [0, span]."""
    knots = np.linspace(0.0, span, cfg.extension + 2)
    com = np.interp(t, knots, np.asarray(center_of_mass(cfg), dtype=float) / 2.0)
    prof = np.interp(t, knots, np.asarray(profile(cfg), dtype=float), right=0.0)
    return com / space_scale, prof / space_scale


def mean_profile(
    ens: Union[Ensemble, Sequence[StretchConfig]],
    time_exp: Exponent,
    space_exp: Exponent,
    grid: int,
    t_max: Optional[float] = None,
    align_to: Optional[float] = None,
) -> MeanProfile:
    """Average rescaled profiles over the ensemble on a common time grid.

    Each configuration is flipped first so its vertical displacement is >= 0,
    then read with rescale_at(padded=True): past its own extension it contributes
    l_{N+1} = 0 and its final center of mass. t_max defaults to the largest
    rescaled extension in the ensemble.

    With align_to, each configuration is instead read as the polygon through its
    points 0..N+1 placed evenly on [0, align_to], so every sample ends at the same
    time and t_max defaults to align_to.
    """
    if grid <= 0:
        raise InvalidConfigurationError(f"grid must be positive, got {grid}")
    if align_to is not None and not align_to > 0.0:
        raise InvalidConfigurationError(f"align_to must be positive, got {align_to}")
    configs = [_align(c) for c in _configs(ens)]
    if t_max is None:
        t_max = align_to if align_to is not None else max(c.extension / c.length ** float(time_exp) for c in configs)
    t = np.linspace(0.0, float(t_max), grid + 1)
    profs = []
    coms = []
    for cfg in configs:
        if align_to is None:
            com, prof = rescale_at(cfg, t, time_exp, space_exp, padded=True)
        else:
            com, prof = _polygon(cfg, t, align_to, cfg.length ** float(space_exp))
        profs.append(prof)
        coms.append(com)
    p = np.vstack(profs)
    m = np.vstack(coms)
    k = p.shape[0]
    spread = (lambda a: a.std(axis=0, ddof=1) / math.sqrt(k)) if k > 1 else (lambda a: np.zeros(a.shape[1]))
    return MeanProfile(t, p.mean(axis=0), spread(p), m.mean(axis=0), spread(m), True, align_to)


def sup_distance(t: np.ndarray, values: np.ndarray, other: np.ndarray) -> float:
    if t.shape != values.shape or values.shape != other.shape:
        raise InvalidConfigurationError("curves must share a grid")
    return float(np.max(np.abs(values - other)))


@dataclass(frozen=True)
class ScalingReport:
    """log-log least squares of per-length means: slope with a 95% half-width."""

    observable: str
    lengths: tuple[int, ...]
    means: tuple[float, ...]
    stderrs: tuple[float, ...]
    slope: float
    half_width: float
    intercept: float

    def contains(self, value: float, tolerance: float) -> bool:
        return abs(self.slope - value) <= tolerance


def exponent_fit(
    observable: str,
    lengths: Sequence[int],
    means: Sequence[float],
    stderrs: Optional[Sequence[float]] = None,
) -> ScalingReport:
    if len(lengths) < 3 or len(lengths) != len(means):
        raise InvalidConfigurationError(f"exponent fit needs >= 3 matching points (got {len(lengths)})")
    if any(m <= 0 for m in means) or any(n <= 0 for n in lengths):
        raise InvalidConfigurationError("exponent fit needs positive lengths and means")
    x = np.log(np.asarray(lengths, dtype=float))
    y = np.log(np.asarray(means, dtype=float))
    fit = stats.linregress(x, y)
    half = float(stats.t.ppf(0.975, len(x) - 2) * fit.stderr)
    if stderrs is None:
        stderrs = [0.0] * len(means)
    return ScalingReport(
        observable,
        tuple(int(n) for n in lengths),
        tuple(float(m) for m in means),
        tuple(float(s) for s in stderrs),
        float(fit.slope),
        half,
        float(fit.intercept),
    )


def excursion_bead_count(cfg: StretchConfig) -> int:
    """Bead count read off the walk image: excursions plus zero stretches."""
    return len(excursions(to_walk(cfg))) + sum(1 for v in cfg.stretches if v == 0)


def center_of_mass_stats(ens: Union[Ensemble, Sequence[StretchConfig]]) -> Estimate:
    """max_i |M_i| / L^{1/2} over the ensemble."""
    configs = _configs(ens)
    return Estimate.of([max(abs(m) for m in center_of_mass(c)) / (2.0 * math.sqrt(c.length)) for c in configs])


def hamiltonian_stats(ens: Union[Ensemble, Sequence[StretchConfig]]) -> tuple[Estimate, Estimate]:
    """(H, H / L)."""
    configs = _configs(ens)
    h = np.array([hamiltonian(c) for c in configs], dtype=float)
    length = np.array([c.length for c in configs], dtype=float)
    return Estimate.of(h), Estimate.of(h / length)


def max_stretch_stats(ens: Union[Ensemble, Sequence[StretchConfig]]) -> Estimate:
    return Estimate.of([max_stretch(c) for c in _configs(ens)])
