"""Figure rendering for population-inversion comparisons.

Plots are derived artifacts: they are rendered from the delimited curve
files written by the run command, never from in-memory results, so a
figure can always be reproduced from the tabular output alone.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .output import read_curve

__all__ = ["plot_comparison"]

STYLE = {
    "jc": dict(color="tab:green", label="Jaynes-Cummings (analytic)"),
    "fullquantum": dict(color="tab:olive", label="full quantum (truncated Fock)"),
    "meanfield": dict(color="tab:blue", label="mean field"),
    "bohmian": dict(color="tab:red", label="Bohmian"),
}


def plot_comparison(out_dir, title: str = "", formats=("pdf", "png")) -> list[Path]:
    """Render W vs 2gt with CI bands from every w_<method>.csv in out_dir."""
    out_dir = Path(out_dir)
    curve_files = sorted(out_dir.glob("w_*.csv"))
    if not curve_files:
        raise FileNotFoundError(f"no w_*.csv curve files in {out_dir}")
    fig, ax = plt.subplots(figsize=(9, 4.5))
    for f in curve_files:
        method = f.stem[2:]
        data = read_curve(f)
        style = STYLE.get(method, dict(label=method))
        ax.plot(data["two_g_t"], data["W_mean"], lw=1.0, **style)
        lo, hi = data["W_ci_low"], data["W_ci_high"]
        if np.isfinite(lo).any():
            ax.fill_between(
                data["two_g_t"], lo, hi, alpha=0.3, color=style.get("color"), lw=0
            )
    ax.set_xlabel(r"$2gt$")
    ax.set_ylabel(r"$W$")
    ax.set_ylim(-1.05, 1.05)
    if title:
        ax.set_title(title)
    ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    written = []
    for ext in formats:
        target = out_dir / f"comparison.{ext}"
        fig.savefig(target, dpi=150)
        written.append(target)
    plt.close(fig)
    return written
