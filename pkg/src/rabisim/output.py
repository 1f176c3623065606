"""Delimited tabular output for population-inversion curves.

Each method gets one CSV with columns t, two_g_t, W_mean, W_ci_low,
W_ci_high; deterministic methods leave the CI columns empty. Values are
printed in fixed 15-significant-digit scientific notation so reruns can
be compared byte for byte.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

__all__ = ["write_curve", "read_curve", "write_comparison", "write_manifest"]

HEADER = ["t", "two_g_t", "W_mean", "W_ci_low", "W_ci_high"]


def _fmt(v) -> str:
    return "" if v is None else f"{float(v):.14e}"


def write_curve(path, t, two_g_t, mean, ci_low=None, ci_high=None) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(HEADER)
        for i in range(len(t)):
            w.writerow(
                [
                    _fmt(t[i]),
                    _fmt(two_g_t[i]),
                    _fmt(mean[i]),
                    _fmt(None if ci_low is None else ci_low[i]),
                    _fmt(None if ci_high is None else ci_high[i]),
                ]
            )
    return path


def read_curve(path) -> dict[str, np.ndarray]:
    data = np.genfromtxt(path, delimiter=",", names=True, filling_values=np.nan)
    return {name: np.atleast_1d(data[name]) for name in data.dtype.names}


def write_comparison(path, t, two_g_t, curves: dict[str, tuple]) -> Path:
    """Combined file: t, two_g_t, then (mean, ci_low, ci_high) per method."""
    path = Path(path)
    methods = list(curves)
    header = ["t", "two_g_t"]
    for m in methods:
        header += [f"{m}_W_mean", f"{m}_W_ci_low", f"{m}_W_ci_high"]
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for i in range(len(t)):
            row = [_fmt(t[i]), _fmt(two_g_t[i])]
            for m in methods:
                mean, lo, hi = curves[m]
                row += [
                    _fmt(mean[i]),
                    _fmt(None if lo is None else lo[i]),
                    _fmt(None if hi is None else hi[i]),
                ]
            w.writerow(row)
    return path


def write_manifest(out_dir, entries: dict) -> Path:
    path = Path(out_dir) / "manifest.json"
    path.write_text(json.dumps(entries, indent=2, sort_keys=True) + "\n")
    return path
