"""Monte Carlo ensemble orchestration and batch-means confidence intervals.

Each sample owns an independent random stream derived from the master
seed by its sample index, so results are bit-identical for any worker
count or scheduling order. Samples are averaged on the scenario's common
time grid; 2-sigma bands come from the spread of contiguous batch means.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np
from joblib import Parallel, delayed

from .bohmian import BohmianState, evolve_bohmian
from .field import sample_initial_field
from .hydrogen import sample_position
from .meanfield import MeanFieldState, evolve_meanfield, total_energy
from .scenario import ScenarioParams

__all__ = ["EnsembleResult", "batch_ci", "run_ensemble", "worker_count"]

WORKERS_ENV = "RABISIM_WORKERS"
DEGRADED_FLAG_FRACTION = 0.01


@dataclass
class EnsembleResult:
    method: str
    t: np.ndarray
    two_g_t: np.ndarray
    mean_W: np.ndarray
    ci_low: np.ndarray
    ci_high: np.ndarray
    n_samples: int
    n_batches: int
    flagged: int
    seed: int
    degraded: bool
    # conservation diagnostics, max over all unflagged trajectories
    max_norm_drift: float = float("nan")
    max_energy_drift: float = float("nan")  # relative; mean-field only


def worker_count() -> int:
    """Worker override from the environment, else single-process."""
    raw = os.environ.get(WORKERS_ENV, "")
    if raw.strip():
        return max(1, int(raw))
    return 1


def batch_ci(per_sample_W: np.ndarray, n_batches: int):
    """Batch-means mean and 2-sigma band.

    Batches are contiguous in sample order; the band is
    mean +- 2 * std(batch means) / sqrt(n_batches). Rows containing NaN
    (flagged trajectories) are excluded from their batch.
    """
    if n_batches < 2:
        raise ValueError("need at least 2 batches")
    per_sample_W = np.asarray(per_sample_W, dtype=float)
    n_samples = per_sample_W.shape[0]
    if n_samples % n_batches:
        raise ValueError("sample count must be divisible by n_batches")
    batches = per_sample_W.reshape(n_batches, n_samples // n_batches, -1)
    ok = ~np.isnan(batches).any(axis=2, keepdims=True)
    counts = ok.sum(axis=1)
    if np.any(counts == 0):
        raise ValueError("a batch lost all its samples to flagging")
    means = np.where(ok, batches, 0.0).sum(axis=1) / counts
    mean = means.mean(axis=0)
    half = 2.0 * means.std(axis=0, ddof=1) / np.sqrt(n_batches)
    return mean, mean - half, mean + half


def _simulate_sample(scenario: ScenarioParams, method: str, seed: int, index: int,
                     t_grid: np.ndarray):
    """One trajectory; returns (W, flagged, norm_drift, energy_drift).

    The field sample is drawn first so that mean-field and Bohmian runs
    with the same seed share identical field initial conditions."""
    rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(index,)))
    fs = sample_initial_field(scenario.coherent, rng)
    c_plus, c_minus = (1.0 + 0.0j, 0.0j) if scenario.atom_init == "excited" else (0.0j, 1.0 + 0.0j)
    if method == "meanfield":
        traj = evolve_meanfield(
            MeanFieldState(c_plus, c_minus, fs.Q, fs.Qdot),
            scenario.pair,
            scenario.alpha,
            t_grid,
            rtol=scenario.rtol,
            atol=scenario.atol,
        )
        energy = total_energy(traj, scenario.pair, scenario.alpha)
        e_scale = max(abs(energy[0]), 1e-300)
        return (
            traj.W,
            False,
            float(np.max(np.abs(traj.norm() - 1.0))),
            float(np.max(np.abs(energy - energy[0])) / e_scale),
        )
    if method == "bohmian":
        x0 = sample_position(scenario.initial_qn(), rng)
        traj = evolve_bohmian(
            BohmianState(c_plus, c_minus, x0, fs.Q, fs.Qdot),
            scenario.pair,
            scenario.alpha,
            t_grid,
            rtol=scenario.rtol,
            atol=scenario.atol,
        )
        norms = traj.norm()
        drift = float(np.nanmax(np.abs(norms - 1.0))) if np.isfinite(norms).any() else np.nan
        return traj.W, traj.flagged, drift, np.nan
    raise ValueError(f"ensemble method must be meanfield|bohmian, got {method!r}")


def run_ensemble(
    scenario: ScenarioParams,
    method: str,
    n_samples: int | None = None,
    n_batches: int | None = None,
    seed: int | None = None,
    workers: int | None = None,
) -> EnsembleResult:
    """Run a Monte Carlo ensemble of one semi-classical method.

    Flagged (node-trapped) trajectories are excluded from the averages but
    counted; more than 1% of them marks the result as degraded.
    """
    n_samples = scenario.n_samples if n_samples is None else n_samples
    n_batches = scenario.n_batches if n_batches is None else n_batches
    seed = scenario.seed if seed is None else seed
    if n_samples < n_batches or n_batches < 2:
        raise ValueError("need n_samples >= n_batches >= 2")
    if n_samples % n_batches:
        raise ValueError("n_samples must be divisible by n_batches")
    workers = worker_count() if workers is None else max(1, workers)
    t_grid, two_g_t = scenario.time_grids()

    if workers == 1:
        results = [
            _simulate_sample(scenario, method, seed, i, t_grid) for i in range(n_samples)
        ]
    else:
        results = Parallel(n_jobs=workers, backend="loky")(
            delayed(_simulate_sample)(scenario, method, seed, i, t_grid)
            for i in range(n_samples)
        )
    per_sample = np.vstack([r[0] for r in results])
    flags = [r[1] for r in results]
    flagged = sum(flags)
    per_sample[flags, :] = np.nan
    mean, lo, hi = batch_ci(per_sample, n_batches)
    norm_drifts = [r[2] for r, f in zip(results, flags) if not f]
    energy_drifts = [r[3] for r, f in zip(results, flags) if not f and np.isfinite(r[3])]
    return EnsembleResult(
        method=method,
        t=t_grid,
        two_g_t=two_g_t,
        mean_W=mean,
        ci_low=lo,
        ci_high=hi,
        n_samples=n_samples,
        n_batches=n_batches,
        flagged=flagged,
        seed=seed,
        degraded=flagged > DEGRADED_FLAG_FRACTION * n_samples,
        max_norm_drift=float(np.nanmax(norm_drifts)) if norm_drifts else np.nan,
        max_energy_drift=float(np.max(energy_drifts)) if energy_drifts else np.nan,
    )
