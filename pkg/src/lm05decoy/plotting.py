"""Rate-versus-loss figures.

Figures are written through the Agg backend. SVG output is made reproducible
by fixing the id hash salt and dropping the creation date.
"""

from __future__ import annotations

from pathlib import Path
from typing import Mapping, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

STYLE = {
    "font.size": 10,
    "axes.labelsize": 11,
    "legend.fontsize": 9,
    "xtick.labelsize": 9,
    "ytick.labelsize": 9,
    "svg.hashsalt": "lm05decoy",
    "svg.fonttype": "none",
}


def _positive(values: Sequence[float]) -> np.ndarray:
    # log axis: non-positive rates are simply not drawn
    arr = np.asarray(values, dtype=float)
    return np.where(arr > 0, arr, np.nan)


def plot_rate_vs_loss(
    path: str | Path,
    loss_db: Sequence[float],
    curves: Mapping[str, Sequence[float]],
    points: Mapping[str, tuple[Sequence[float], Sequence[float]]] | None = None,
    title: str | None = None,
    ylabel: str = "key rate per pulse",
) -> Path:
    """Draw log-scale rate curves (lines) and optional measured points (markers)."""
    path = Path(path)
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(6.0, 4.2))
        for label, ys in curves.items():
            ax.plot(loss_db, _positive(ys), label=label, linewidth=1.4)
        for label, (xs, ys) in (points or {}).items():
            ax.plot(xs, _positive(ys), linestyle="none", marker="o", markersize=4, label=label)
        ax.set_yscale("log")
        ax.set_xlabel("channel loss (dB)")
        ax.set_ylabel(ylabel)
        if title:
            ax.set_title(title)
        ax.grid(True, which="both", alpha=0.3, linewidth=0.5)
        ax.legend(frameon=False)
        fig.tight_layout()
        fig.savefig(path, metadata={"Date": None} if path.suffix.lower() == ".svg" else None)
        plt.close(fig)
    return path
