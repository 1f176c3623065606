import dataclasses

import numpy as np
import pytest

import rabisim.ensemble as ensemble_mod
from rabisim.ensemble import batch_ci, run_ensemble, worker_count
from rabisim.field import FieldSample
from rabisim.scenario import PRESETS


def _tiny(preset="table1-gamma2", **over):
    base = dict(n_samples=12, n_batches=4, n_time=25, t_max_2gt=2.0, seed=11)
    base.update(over)
    return dataclasses.replace(PRESETS[preset], **base)


class TestBatchCi:
    def test_constant_samples_zero_width(self):
        w = np.ones((20, 7)) * 0.4
        mean, lo, hi = batch_ci(w, 4)
        np.testing.assert_allclose(mean, 0.4)
        np.testing.assert_allclose(hi - lo, 0.0, atol=1e-15)

    def test_mean_is_sample_mean_without_nans(self):
        rng = np.random.default_rng(3)
        w = rng.normal(size=(40, 5))
        mean, _, _ = batch_ci(w, 8)
        np.testing.assert_allclose(mean, w.mean(axis=0), atol=1e-12)

    def test_band_formula(self):
        rng = np.random.default_rng(4)
        w = rng.normal(size=(30, 1))
        mean, lo, hi = batch_ci(w, 5)
        bm = w.reshape(5, 6).mean(axis=1)
        half = 2 * bm.std(ddof=1) / np.sqrt(5)
        assert hi[0] - mean[0] == pytest.approx(half)
        assert mean[0] - lo[0] == pytest.approx(half)

    def test_width_scales_inverse_sqrt_n(self):
        """With fixed batch count, quadrupling the samples roughly halves
        the band (i.i.d. noise)."""
        rng = np.random.default_rng(5)
        widths = []
        for n in (400, 1600):
            reps = []
            for _ in range(40):
                w = rng.normal(size=(n, 1))
                mean, lo, hi = batch_ci(w, 8)
                reps.append(hi[0] - lo[0])
            widths.append(np.mean(reps))
        assert widths[0] / widths[1] == pytest.approx(2.0, rel=0.15)

    def test_coverage_near_095(self):
        """With many batches the 2-sigma band covers the true mean at close
        to the Gaussian 95.4% rate."""
        rng = np.random.default_rng(6)
        hits = 0
        trials = 2000
        for _ in range(trials):
            w = rng.normal(size=(200, 1))
            _, lo, hi = batch_ci(w, 50)
            hits += lo[0] <= 0.0 <= hi[0]
        assert 0.90 <= hits / trials <= 0.99

    def test_nan_rows_excluded(self):
        w = np.ones((12, 3)) * 0.25
        w[5] = np.nan
        mean, lo, hi = batch_ci(w, 4)
        np.testing.assert_allclose(mean, 0.25)

    def test_batch_entirely_nan_raises(self):
        w = np.ones((8, 2))
        w[0:2] = np.nan
        with pytest.raises(ValueError, match="batch"):
            batch_ci(w, 4)

    def test_too_few_batches_raises(self):
        with pytest.raises(ValueError, match="batches"):
            batch_ci(np.ones((8, 2)), 1)

    def test_indivisible_raises(self):
        with pytest.raises(ValueError, match="divisible"):
            batch_ci(np.ones((10, 2)), 4)


class TestWorkerCount:
    def test_default_single(self, monkeypatch):
        monkeypatch.delenv("RABISIM_WORKERS", raising=False)
        assert worker_count() == 1

    def test_env_override(self, monkeypatch):
        monkeypatch.setenv("RABISIM_WORKERS", "3")
        assert worker_count() == 3

    def test_floor_at_one(self, monkeypatch):
        monkeypatch.setenv("RABISIM_WORKERS", "0")
        assert worker_count() == 1


class TestRunEnsemble:
    def test_deterministic_same_seed(self):
        sc = _tiny()
        a = run_ensemble(sc, "meanfield")
        b = run_ensemble(sc, "meanfield")
        np.testing.assert_array_equal(a.mean_W, b.mean_W)
        np.testing.assert_array_equal(a.ci_low, b.ci_low)

    def test_seed_changes_result(self):
        sc = _tiny()
        a = run_ensemble(sc, "meanfield")
        b = run_ensemble(sc, "meanfield", seed=99)
        assert np.max(np.abs(a.mean_W - b.mean_W)) > 1e-6

    def test_workers_do_not_change_bits(self):
        sc = _tiny(n_samples=8, n_batches=4)
        one = run_ensemble(sc, "meanfield", workers=1)
        two = run_ensemble(sc, "meanfield", workers=2)
        np.testing.assert_array_equal(one.mean_W, two.mean_W)
        np.testing.assert_array_equal(one.ci_high, two.ci_high)

    def test_zero_variance_field_gives_zero_width(self, monkeypatch):
        """If every sample draws the same field, the mean-field band
        collapses to zero width."""

        def fixed_field(coherent, rng):
            return FieldSample(Q=coherent.gamma_r * np.sqrt(2.0 / coherent.nu), Qdot=0.0)

        monkeypatch.setattr(ensemble_mod, "sample_initial_field", fixed_field)
        res = run_ensemble(_tiny(), "meanfield")
        np.testing.assert_allclose(res.ci_high - res.ci_low, 0.0, atol=1e-13)

    def test_meanfield_diagnostics(self):
        res = run_ensemble(_tiny(), "meanfield")
        assert res.flagged == 0
        assert not res.degraded
        assert res.max_norm_drift < 1e-9
        assert res.max_energy_drift < 1e-8

    def test_bohmian_runs_and_conserves_norm(self):
        res = run_ensemble(_tiny(n_samples=4, n_batches=2), "bohmian")
        assert res.flagged == 0
        assert res.max_norm_drift < 1e-9
        assert np.all(np.isfinite(res.mean_W))

    def test_field_draw_shared_across_methods(self):
        """At short times the Bohmian and mean-field means nearly coincide
        sample-for-sample because they share field initial conditions."""
        sc = _tiny(n_samples=6, n_batches=2, t_max_2gt=0.5, n_time=10)
        mf = run_ensemble(sc, "meanfield")
        bm = run_ensemble(sc, "bohmian")
        assert np.max(np.abs(mf.mean_W - bm.mean_W)) < 0.02

    def test_time_axes(self):
        res = run_ensemble(_tiny(), "meanfield")
        np.testing.assert_allclose(res.two_g_t, np.linspace(0.0, 2.0, 25))
        g = PRESETS["table1-gamma2"].g
        np.testing.assert_allclose(res.t * 2 * g, res.two_g_t, atol=1e-12)

    def test_bad_method_raises(self):
        with pytest.raises(ValueError, match="method"):
            run_ensemble(_tiny(n_samples=2, n_batches=2), "jc")

    def test_bad_batching_raises(self):
        with pytest.raises(ValueError, match="divisible"):
            run_ensemble(_tiny(), "meanfield", n_samples=10, n_batches=4)
        with pytest.raises(ValueError):
            run_ensemble(_tiny(), "meanfield", n_batches=1)

    def test_degraded_flag(self, monkeypatch):
        """If a large fraction of Bohmian samples get node-trapped, the
        result is marked degraded but averages still come out."""
        import rabisim.bohmian as bmod

        real = bmod.evolve_bohmian
        calls = iter(range(10**6))

        def trap_some(s0, pair, alpha, t_grid, **kw):
            traj = real(s0, pair, alpha, t_grid, **kw)
            if next(calls) == 1:  # trap one sample out of eight
                traj.flagged = True
                traj.W = np.where(np.arange(len(t_grid)) > 0, np.nan, traj.W)
            return traj

        monkeypatch.setattr(ensemble_mod, "evolve_bohmian", trap_some)
        res = run_ensemble(_tiny(n_samples=8, n_batches=2, n_time=6), "bohmian")
        assert res.flagged > 0
        assert res.degraded
