"""Configurations: signed stretch vectors, Hamiltonian, walk bijection, envelopes, beads, patterns."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Sequence, Union

import numpy as np

from .errors import InvalidConfigurationError, InvalidWalkError
from .walk import WalkPath

Exponent = Union[int, float, Fraction]


@dataclass(frozen=True)
class StretchConfig:
    """A polymer of `length` monomers as signed vertical stretches (l_1, ..., l_N)."""

    stretches: tuple[int, ...]
    length: int

    def __post_init__(self) -> None:
        validate_stretches(self.stretches, self.length)

    @classmethod
    def from_stretches(cls, stretches: Sequence[int]) -> "StretchConfig":
        """Build a config, deriving L = sum |l| + N."""
        st = tuple(int(v) for v in stretches)
        return cls(st, sum(abs(v) for v in st) + len(st))

    @property
    def extension(self) -> int:
        """Number of stretches N (horizontal extension)."""
        return len(self.stretches)

    def flipped(self) -> "StretchConfig":
        """Mirror image l -> -l (same energy, same geometry up to reflection)."""
        return StretchConfig(tuple(-v for v in self.stretches), self.length)

    def __str__(self) -> str:
        return f"{self.extension} " + " ".join(str(v) for v in self.stretches)


def validate_stretches(stretches: Sequence[int], length: int) -> None:
    """Raise InvalidConfigurationError unless stretches belong to the length-L family."""
    n = len(stretches)
    if length < 1:
        raise InvalidConfigurationError(f"length must be positive, got {length}")
    if n < 1 or n > length:
        raise InvalidConfigurationError(f"extension {n} outside 1..{length}")
    total = sum(abs(int(v)) for v in stretches) + n
    if total != length:
        raise InvalidConfigurationError(
            f"stretches {tuple(stretches)} have sum|l|+N = {total}, expected {length}"
        )


@dataclass(frozen=True)
class BeadDecomposition:
    """Bead boundaries x_0=0 < x_1 < ... < x_n (last one is N) and bead sizes I_j."""

    boundaries: tuple[int, ...]
    sizes: tuple[int, ...]
    largest_index: int

    @property
    def count(self) -> int:
        return len(self.sizes)

    @property
    def largest_size(self) -> int:
        return self.sizes[self.largest_index]


@dataclass(frozen=True)
class PatternDecomposition:
    """Stop times T_0=0 < T_1 < ... < T_p at zero stretches, pattern sizes sigma_k.

    `incomplete` is the monomer count of a trailing segment without a zero stretch
    (0 when the configuration ends with a zero stretch).
    """

    stop_times: tuple[int, ...]
    sizes: tuple[int, ...]
    incomplete: int

    @property
    def count(self) -> int:
        return len(self.sizes)


def wedge(x: int, y: int) -> int:
    """|x| min |y| when x and y have opposite signs, else 0."""
    if x * y < 0:
        return min(abs(x), abs(y))
    return 0


def hamiltonian(cfg: StretchConfig) -> int:
    """Number of self-touchings: sum of wedges of consecutive stretches."""
    st = cfg.stretches
    return sum(wedge(st[i], st[i + 1]) for i in range(len(st) - 1))


def to_walk(cfg: StretchConfig) -> WalkPath:
    """V_0 = V_{N+1} = 0 and V_i = (-1)^(i-1) l_i."""
    values = [0]
    for i, v in enumerate(cfg.stretches):
        values.append(v if i % 2 == 0 else -v)
    values.append(0)
    return WalkPath(tuple(values))


def from_walk(walk: WalkPath) -> StretchConfig:
    """Inverse of to_walk. The walk must start and end at 0 with N >= 1 interior points."""
    v = walk.values
    if len(v) < 3 or v[0] != 0 or v[-1] != 0:
        raise InvalidWalkError(f"walk must be pinned to 0 at both ends with N >= 1: {v}")
    stretches = tuple(v[i] if i % 2 == 1 else -v[i] for i in range(1, len(v) - 1))
    return StretchConfig.from_stretches(stretches)


def partial_sums(cfg: StretchConfig) -> tuple[int, ...]:
    """S_0 = 0, S_i = l_1 + ... + l_i."""
    out = [0]
    for v in cfg.stretches:
        out.append(out[-1] + v)
    return tuple(out)


def envelopes(cfg: StretchConfig) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Upper and lower envelopes, indices 0..N+1."""
    s = partial_sums(cfg)
    n = cfg.extension
    upper = [0] + [max(s[i - 1], s[i]) for i in range(1, n + 1)] + [s[n]]
    lower = [0] + [min(s[i - 1], s[i]) for i in range(1, n + 1)] + [s[n]]
    return tuple(upper), tuple(lower)


def center_of_mass(cfg: StretchConfig) -> tuple[int, ...]:
    """Doubled center-of-mass curve 2*M_i, indices 0..N+1 (exact half-integers)."""
    s = partial_sums(cfg)
    n = cfg.extension
    inner = [2 * s[i - 1] + cfg.stretches[i - 1] for i in range(1, n + 1)]
    return tuple([0] + inner + [2 * s[n]])


def profile(cfg: StretchConfig) -> tuple[int, ...]:
    """|l_i| padded with l_0 = l_{N+1} = 0 (length N+2)."""
    return (0,) + tuple(abs(v) for v in cfg.stretches) + (0,)


def vertical_displacement(cfg: StretchConfig) -> int:
    """l_1 + ... + l_N (height of the end point)."""
    return sum(cfg.stretches)


def beads(cfg: StretchConfig) -> BeadDecomposition:
    """Split at every i with l_i wedge l_{i+1} = 0, using l_{N+1} = 0 so the last bead ends at N."""
    st = cfg.stretches
    n = len(st)
    boundaries = [0]
    for i in range(1, n + 1):
        nxt = st[i] if i < n else 0
        if wedge(st[i - 1], nxt) == 0:
            boundaries.append(i)
    sizes = []
    for a, b in zip(boundaries, boundaries[1:]):
        sizes.append(sum(abs(v) for v in st[a:b]) + (b - a))
    largest = max(range(len(sizes)), key=lambda j: sizes[j])
    return BeadDecomposition(tuple(boundaries), tuple(sizes), largest)


def patterns(cfg: StretchConfig) -> PatternDecomposition:
    """Cut after every zero stretch; the tail after the last zero is incomplete."""
    st = cfg.stretches
    stops = [0]
    sizes = []
    acc = 0
    for i, v in enumerate(st, start=1):
        acc += abs(v) + 1
        if v == 0:
            stops.append(i)
            sizes.append(acc)
            acc = 0
    return PatternDecomposition(tuple(stops), tuple(sizes), acc)


def rescale(
    cfg: StretchConfig,
    time_exp: Exponent,
    space_exp: Exponent,
    grid: int,
    t_max: Optional[float] = None,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Sample (M_{i}, |l_i|) / L^space_exp at i = floor(t L^time_exp) clamped to N.

    Returns (t, center_of_mass, profile) on grid+1 uniform points of [0, t_max];
    t_max defaults to N / L^time_exp so the whole configuration is covered.
    """
    if grid <= 0:
        raise InvalidConfigurationError(f"grid must be positive, got {grid}")
    if t_max is None:
        t_max = cfg.extension / cfg.length ** float(time_exp)
    t = np.linspace(0.0, float(t_max), grid + 1)
    com, prof = rescale_at(cfg, t, time_exp, space_exp)
    return t, com, prof


def rescale_at(
    cfg: StretchConfig,
    t: np.ndarray,
    time_exp: Exponent,
    space_exp: Exponent,
    padded: bool = False,
) -> tuple[np.ndarray, np.ndarray]:
    """rescale() at given times.

    With `padded` the index is clamped to N + 1 instead of N, so past the
    extension the profile reads l_{N+1} = 0 and the center of mass S_N.
    """
    L = cfg.length
    time_scale = L ** float(time_exp)
    space_scale = L ** float(space_exp)
    raw = np.floor(np.asarray(t, dtype=float) * time_scale + 1e-9).astype(np.int64)
    idx = np.clip(raw, 0, cfg.extension + 1 if padded else cfg.extension)
    com2 = np.asarray(center_of_mass(cfg), dtype=float)
    prof = np.asarray(profile(cfg), dtype=float)
    return com2[idx] / (2.0 * space_scale), prof[idx] / space_scale


def enumerate_configs(length: int) -> Iterator[StretchConfig]:
    """All configurations of the given length, in a fixed lexicographic order."""
    if length < 1:
        raise InvalidConfigurationError(f"length must be positive, got {length}")

    def rec(remaining: int, prefix: list[int]) -> Iterator[tuple[int, ...]]:
        if remaining == 0:
            yield tuple(prefix)
            return
        for k in range(remaining):
            signs = (0,) if k == 0 else (k, -k)
            for v in signs:
                prefix.append(v)
                yield from rec(remaining - k - 1, prefix)
                prefix.pop()

    for st in rec(length, []):
        yield StretchConfig(st, length)


def count_configs(length: int) -> int:
    """|Omega_L| by the recursion a_L = 2 a_{L-1} + a_{L-2} (a_0 = 1, a_1 = 1)."""
    a, b = 1, 1
    for _ in range(length - 1):
        a, b = b, 2 * b + a
    return b if length >= 1 else 0


def max_stretch(cfg: StretchConfig) -> int:
    """Largest stretch magnitude (vertical size of the polymer)."""
    return max(abs(v) for v in cfg.stretches)


__all__ = [
    "StretchConfig",
    "BeadDecomposition",
    "PatternDecomposition",
    "wedge",
    "hamiltonian",
    "to_walk",
    "from_walk",
    "partial_sums",
    "envelopes",
    "center_of_mass",
    "profile",
    "vertical_displacement",
    "beads",
    "patterns",
    "rescale",
    "rescale_at",
    "enumerate_configs",
    "count_configs",
    "max_stretch",
]
