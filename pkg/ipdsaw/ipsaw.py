"""Exhaustive enumeration of SAW, prudent, north-east prudent and partially directed paths.

Energies count self-touchings between step midpoints: two non-consecutive steps
touch when their midpoints are at distance 1. Midpoints are stored doubled so all
coordinates are integers.
"""

from __future__ import annotations

import logging
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence

from .constants import DIRECTED_MAX_L, SAW_MAX_L
from .errors import BudgetExceededError, InvalidConfigurationError
from .model import StretchConfig
from .util import safe_exp, source_hash

logger = logging.getLogger(__name__)

SAW = "SAW"
PSAW = "PSAW"
NE = "NE"
PD = "PD"
# smallest family first
FAMILIES = (PD, NE, PSAW, SAW)

STEPS = {"R": (1, 0), "U": (0, 1), "L": (-1, 0), "D": (0, -1)}
STEP_ORDER = ("R", "U", "L", "D")
_OPPOSITE = {"R": "L", "L": "R", "U": "D", "D": "U"}
_TOUCH_OFFSETS = ((2, 0), (-2, 0), (0, 2), (0, -2))

PREFIX_DEPTH = 2


@dataclass(frozen=True)
class LatticePath:
    """Steps over R/U/L/D starting at the origin."""

    steps: tuple[str, ...]

    def __post_init__(self) -> None:
        bad = [s for s in self.steps if s not in STEPS]
        if bad:
            raise InvalidConfigurationError(f"unknown steps {bad} (use R, U, L, D)")

    @classmethod
    def parse(cls, text: str | Sequence[str]) -> "LatticePath":
        return cls(tuple(str(s).upper() for s in text))

    def __len__(self) -> int:
        return len(self.steps)

    def __str__(self) -> str:
        return "".join(self.steps)

    @property
    def sites(self) -> tuple[tuple[int, int], ...]:
        x = y = 0
        out = [(0, 0)]
        for s in self.steps:
            dx, dy = STEPS[s]
            x, y = x + dx, y + dy
            out.append((x, y))
        return tuple(out)

    @property
    def midpoints(self) -> tuple[tuple[int, int], ...]:
        """Doubled midpoints w_{i-1} + w_i."""
        w = self.sites
        return tuple((a[0] + b[0], a[1] + b[1]) for a, b in zip(w, w[1:]))


def is_self_avoiding(path: LatticePath) -> bool:
    sites = path.sites
    return len(set(sites)) == len(sites)


def _ray_hits(origin: tuple[int, int], step: str, site: tuple[int, int]) -> bool:
    dx, dy = STEPS[step]
    rx, ry = site[0] - origin[0], site[1] - origin[1]
    if dx:
        return ry == 0 and rx * dx >= 1
    return rx == 0 and ry * dy >= 1


def is_prudent_naive(path: LatticePath) -> bool:
    """Full ray scan: no step points toward a site visited before it."""
    sites = path.sites
    for k, step in enumerate(path.steps):
        origin = sites[k]
        if any(_ray_hits(origin, step, sites[j]) for j in range(k)):
            return False
    return True


def _toward_third_quadrant(x: int, y: int, step: str) -> bool:
    """Whether the ray {(x, y) + t d, t >= 1} meets (-inf, 0]^2."""
    if step == "L":
        return y <= 0
    if step == "D":
        return x <= 0
    if step == "R":
        return x <= -1 and y <= 0
    return x <= 0 and y <= -1


def is_north_east(path: LatticePath) -> bool:
    if not is_prudent_naive(path):
        return False
    sites = path.sites
    return not any(_toward_third_quadrant(*sites[k], s) for k, s in enumerate(path.steps))


def is_partially_directed(path: LatticePath) -> bool:
    """Image of a stretch vector: starts right, never left, no vertical reversal."""
    st = path.steps
    if not st or st[0] != "R" or "L" in st:
        return False
    return all(not (a in "UD" and b == _OPPOSITE[a]) for a, b in zip(st, st[1:]))


def classify(path: LatticePath) -> frozenset[str]:
    """Family tags of the path; the tags always form an upward-closed chain."""
    if not is_self_avoiding(path):
        return frozenset()
    tags = {SAW}
    if not is_prudent_naive(path):
        return frozenset(tags)
    tags.add(PSAW)
    if not is_north_east(path):
        return frozenset(tags)
    tags.add(NE)
    if is_partially_directed(path):
        tags.add(PD)
    return frozenset(tags)


def self_touchings(path: LatticePath) -> int:
    """Non-consecutive step pairs whose doubled midpoints differ by (+-2, 0) or (0, +-2)."""
    if not is_self_avoiding(path):
        raise InvalidConfigurationError(f"path {path} is not self-avoiding")
    mids = path.midpoints
    index = {m: i for i, m in enumerate(mids)}
    count = 0
    for i, (mx, my) in enumerate(mids):
        for ox, oy in _TOUCH_OFFSETS:
            j = index.get((mx + ox, my + oy))
            if j is not None and j <= i - 2:
                count += 1
    return count


def path_from_stretches(cfg: StretchConfig) -> LatticePath:
    """One step right, then |l| steps up or down, for each stretch."""
    steps: list[str] = []
    for v in cfg.stretches:
        steps.append("R")
        steps.extend(("U" if v > 0 else "D") * abs(v))
    return LatticePath(tuple(steps))


def stretches_from_path(path: LatticePath) -> StretchConfig:
    if not is_partially_directed(path):
        raise InvalidConfigurationError(f"path {path} is not partially directed")
    stretches: list[int] = []
    for s in path.steps:
        if s == "R":
            stretches.append(0)
        else:
            stretches[-1] += 1 if s == "U" else -1
    return StretchConfig(tuple(stretches), len(path))


# --- incremental enumeration ---------------------------------------------------------


class _Walker:
    """Growing path with O(1) step tests for its family and running touch count.

    Prudence uses per-row x bounds and per-column y bounds of visited sites: a step
    right is prudent iff nothing in its row lies further right, and so on.
    """

    def __init__(self, family: str) -> None:
        self.family = family
        self.x = 0
        self.y = 0
        self.visited = {(0, 0)}
        self.rows = {0: (0, 0)}
        self.cols = {0: (0, 0)}
        self.mids: set[tuple[int, int]] = set()
        self.steps: list[str] = []
        self.energy = 0
        self._undo: list[tuple] = []

    def allowed(self, step: str) -> bool:
        x, y = self.x, self.y
        if self.family == PD:
            if step == "L" or (not self.steps and step != "R"):
                return False
            return not self.steps or self.steps[-1] != _OPPOSITE[step]
        if self.family == SAW:
            dx, dy = STEPS[step]
            return (x + dx, y + dy) not in self.visited
        if step == "R":
            ok = self.rows[y][1] == x
        elif step == "L":
            ok = self.rows[y][0] == x
        elif step == "U":
            ok = self.cols[x][1] == y
        else:
            ok = self.cols[x][0] == y
        if ok and self.family == NE:
            ok = not _toward_third_quadrant(x, y, step)
        return ok

    def push(self, step: str) -> None:
        dx, dy = STEPS[step]
        nx, ny = self.x + dx, self.y + dy
        m = (self.x + nx, self.y + ny)
        gained = sum((m[0] + ox, m[1] + oy) in self.mids for ox, oy in _TOUCH_OFFSETS)
        if self.steps and self.steps[-1] == step:
            # the previous midpoint sits straight behind and is consecutive
            gained -= 1
        row = self.rows.get(ny)
        col = self.cols.get(nx)
        self._undo.append((self.x, self.y, row, col, gained))
        self.rows[ny] = (nx, nx) if row is None else (min(row[0], nx), max(row[1], nx))
        self.cols[nx] = (ny, ny) if col is None else (min(col[0], ny), max(col[1], ny))
        self.visited.add((nx, ny))
        self.mids.add(m)
        self.steps.append(step)
        self.x, self.y = nx, ny
        self.energy += gained

    def pop(self) -> None:
        px, py, row, col, gained = self._undo.pop()
        nx, ny = self.x, self.y
        self.steps.pop()
        self.mids.discard((px + nx, py + ny))
        self.visited.discard((nx, ny))
        if row is None:
            del self.rows[ny]
        else:
            self.rows[ny] = row
        if col is None:
            del self.cols[nx]
        else:
            self.cols[nx] = col
        self.x, self.y = px, py
        self.energy -= gained


Histograms = list[Counter]


def _subtree(family: str, prefix: tuple[str, ...], max_length: int) -> Histograms:
    """Energy histograms per length for all paths extending `prefix` (prefix included)."""
    hist: Histograms = [Counter() for _ in range(max_length + 1)]
    walker = _Walker(family)
    for s in prefix:
        if not walker.allowed(s):
            return hist
        walker.push(s)

    def rec(depth: int) -> None:
        hist[depth][walker.energy] += 1
        if depth == max_length:
            return
        for s in STEP_ORDER:
            if walker.allowed(s):
                walker.push(s)
                rec(depth + 1)
                walker.pop()

    rec(len(prefix))
    return hist


def _prefixes(family: str, depth: int) -> tuple[Histograms, list[tuple[str, ...]]]:
    """Histograms of lengths below `depth` and the sorted valid prefixes of length `depth`."""
    hist: Histograms = [Counter() for _ in range(depth)]
    out: list[tuple[str, ...]] = []
    walker = _Walker(family)

    def rec(d: int) -> None:
        if d == depth:
            out.append(tuple(walker.steps))
            return
        hist[d][walker.energy] += 1
        for s in STEP_ORDER:
            if walker.allowed(s):
                walker.push(s)
                rec(d + 1)
                walker.pop()

    rec(0)
    return hist, sorted(out)


def code_hash() -> str:
    """Hash of this module's source, published with every table."""
    return source_hash(Path(__file__))


@dataclass(frozen=True)
class FamilyTable:
    """Energy histograms per length (index = L, L = 0 is the empty path)."""

    family: str
    max_length: int
    histograms: tuple[dict[int, int], ...] = field(repr=False)
    betas: tuple[float, ...] = (0.0,)
    code_hash: str = ""

    def count(self, length: int) -> int:
        return sum(self.histograms[length].values())

    @property
    def counts(self) -> dict[int, int]:
        return {n: self.count(n) for n in range(1, self.max_length + 1)}

    def partition(self, beta: float, length: int) -> float:
        """Z = sum over paths of e^{beta H}."""
        return math.fsum(c * safe_exp(beta * h) for h, c in self.histograms[length].items())

    def log_partition(self, beta: float, length: int) -> float:
        return math.log(self.partition(beta, length))

    @property
    def values(self) -> dict[tuple[int, float], float]:
        return {(n, b): self.partition(b, n) for b in self.betas for n in range(1, self.max_length + 1)}


def _guard(family: str) -> int:
    if family not in FAMILIES:
        raise InvalidConfigurationError(f"unknown family {family!r} (expected one of {', '.join(FAMILIES)})")
    return SAW_MAX_L if family in (SAW, PSAW) else DIRECTED_MAX_L


def enumerate_family(
    family: str,
    max_length: int,
    betas: Iterable[float] = (0.0,),
    workers: int = 1,
    limit: Optional[int] = None,
) -> FamilyTable:
    """Depth-first enumeration up to max_length, split by two-step prefixes.

    Subtrees are merged in sorted prefix order, so any worker count yields the same
    table. `limit` overrides the family's length guard.
    """
    guard = _guard(family)
    if limit is not None:
        guard = limit
    if max_length < 1:
        raise InvalidConfigurationError(f"max_length must be positive, got {max_length}")
    if max_length > guard:
        raise BudgetExceededError(f"{family} enumeration limited to L <= {guard} (got {max_length})")
    depth = min(PREFIX_DEPTH, max_length)
    head, prefixes = _prefixes(family, depth)
    if workers > 1 and len(prefixes) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_subtree, [family] * len(prefixes), prefixes, [max_length] * len(prefixes)))
    else:
        parts = [_subtree(family, p, max_length) for p in prefixes]
    merged: Histograms = [Counter() for _ in range(max_length + 1)]
    for d, h in enumerate(head):
        merged[d].update(h)
    for part in parts:
        for d in range(depth, max_length + 1):
            merged[d].update(part[d])
    logger.info("%s enumeration to L=%d over %d prefixes", family, max_length, len(prefixes))
    return FamilyTable(
        family,
        max_length,
        tuple(dict(sorted(h.items())) for h in merged),
        tuple(float(b) for b in betas),
        code_hash(),
    )


@dataclass(frozen=True)
class GrowthEstimate:
    """log(Z_L / Z_{L-1}) for L = 2..max with successive differences as a trend check."""

    beta: float
    lengths: tuple[int, ...]
    log_ratios: tuple[float, ...]
    increments: tuple[float, ...]

    @property
    def last(self) -> float:
        return self.log_ratios[-1]


def growth_estimates(table: FamilyTable, excess: bool = False) -> dict[float, GrowthEstimate]:
    """Per-beta log-ratio sequences; with excess, beta is subtracted from each ratio."""
    if table.max_length < 3:
        raise InvalidConfigurationError(f"growth estimates need >= 3 lengths (got {table.max_length})")
    out = {}
    for beta in table.betas:
        lengths = tuple(range(2, table.max_length + 1))
        ratios = tuple(
            table.log_partition(beta, n) - table.log_partition(beta, n - 1) - (beta if excess else 0.0) for n in lengths
        )
        incs = tuple(b - a for a, b in zip(ratios, ratios[1:]))
        out[beta] = GrowthEstimate(beta, lengths, ratios, incs)
    return out
