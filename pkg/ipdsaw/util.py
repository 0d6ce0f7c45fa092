"""Helper functions: atomic writes, source hashing, safe exp, seeds and draws."""

from __future__ import annotations

import hashlib
import math
import os
import tempfile
from pathlib import Path
from typing import Optional

import numpy as np


def source_hash(*paths: Path) -> str:
    """SHA-1 of the concatenated contents of source files (code-path attribution)."""
    h = hashlib.sha1()
    for p in paths:
        h.update(Path(p).read_bytes())
    return h.hexdigest()


def write_bytes_atomic(path: Path, data: bytes) -> None:
    """Write bytes to file atomically (temp then replace)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp_")
    try:
        os.write(fd, data)
        os.close(fd)
        os.replace(tmp, path)
    except Exception:
        try:
            os.close(fd)
        except OSError:
            pass
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_text_atomic(path: Path, text: str) -> None:
    """Write text to file atomically."""
    write_bytes_atomic(path, text.encode("utf-8"))


def read_text_safe(path: Path) -> Optional[str]:
    """Read file as text; return None if not found or error."""
    try:
        return Path(path).read_text(encoding="utf-8")
    except (FileNotFoundError, OSError):
        return None


def safe_exp(x: float) -> float:
    """exp(x), or inf instead of OverflowError."""
    try:
        return math.exp(x)
    except OverflowError:
        return math.inf


def make_rng(seed: int) -> np.random.Generator:
    """Seeded PCG64 generator; the seed is recorded by callers in every output."""
    return np.random.default_rng(np.random.SeedSequence(int(seed)))


def child_seeds(seed: int, n: int) -> list[int]:
    """Deterministic independent child seeds for parallel streams."""
    children = np.random.SeedSequence(int(seed)).spawn(n)
    return [int(c.generate_state(2, dtype=np.uint64)[0]) for c in children]


def inverse_cdf_draw(weights: np.ndarray, u: float) -> int:
    """Index drawn by inversion from nonnegative weights with uniform u in [0, 1).

    The last positive cell absorbs residual mass left by rounding.
    """
    w = np.asarray(weights, dtype=float)
    total = math.fsum(w)
    if not total > 0.0:
        raise ValueError("weights must have positive mass")
    cdf = np.cumsum(w) / total
    idx = int(np.searchsorted(cdf, u, side="right"))
    if idx >= w.size:
        idx = int(np.flatnonzero(w > 0)[-1])
    while w[idx] <= 0.0:
        idx += 1
    return idx
