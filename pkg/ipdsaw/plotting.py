"""SVG figures (matplotlib, Agg backend) with fixed metadata for reproducible bytes."""

from __future__ import annotations

import io
from pathlib import Path
from typing import Optional, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .util import write_bytes_atomic  # noqa: E402

matplotlib.rcParams["svg.hashsalt"] = "ipdsaw"
matplotlib.rcParams["svg.fonttype"] = "none"


def _figure(width: float = 6.0, height: Optional[float] = None):
    if height is None:
        height = width * 0.618
    return plt.subplots(figsize=(width, height))


def _save(fig, path: Path) -> Path:
    buf = io.BytesIO()
    fig.savefig(buf, format="svg", metadata={"Date": None})
    plt.close(fig)
    write_bytes_atomic(Path(path), buf.getvalue())
    return Path(path)


def plot_free_energy(rows: Sequence[tuple[float, float, float]], beta_c: float, path: Path) -> Path:
    """Excess free energy against beta, with the critical point marked."""
    fig, ax = _figure()
    beta = [r[0] for r in rows]
    ax.plot(beta, [r[1] for r in rows], marker="o", markersize=3)
    ax.axvline(beta_c, color="grey", linestyle="--", linewidth=0.8)
    ax.set_xlabel("beta")
    ax.set_ylabel("excess free energy")
    return _save(fig, path)


def plot_wulff(s: np.ndarray, curve: np.ndarray, path: Path, beta: float) -> Path:
    fig, ax = _figure()
    ax.plot(s, curve)
    ax.set_xlabel("s")
    ax.set_ylabel("gamma")
    ax.set_title(f"beta = {beta:g}")
    return _save(fig, path)


def plot_profile(
    t: np.ndarray,
    profile: np.ndarray,
    stderr: np.ndarray,
    path: Path,
    reference: Optional[np.ndarray] = None,
) -> Path:
    """Mean rescaled profile with a 2-stderr band, and a limit curve on the same grid if given."""
    fig, ax = _figure()
    ax.plot(t, profile, label="mean profile")
    ax.fill_between(t, profile - 2 * stderr, profile + 2 * stderr, alpha=0.3, linewidth=0)
    if reference is not None:
        ax.plot(t, reference, linestyle="--", label="limit shape")
    ax.set_xlabel("t")
    ax.legend(frameon=False)
    return _save(fig, path)


def plot_fit(lengths: Sequence[int], means: Sequence[float], slope: float, intercept: float, label: str, path: Path) -> Path:
    fig, ax = _figure()
    x = np.asarray(lengths, dtype=float)
    ax.loglog(x, means, "o", label=label)
    ax.loglog(x, np.exp(intercept) * x**slope, "-", label=f"slope {slope:.3f}")
    ax.set_xlabel("L")
    ax.legend(frameon=False)
    return _save(fig, path)
