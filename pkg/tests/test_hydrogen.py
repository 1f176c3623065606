import math

import numpy as np
import pytest
from scipy import integrate
from scipy.stats import kstest

from rabisim import (
    QuantumNumbers,
    bohr_energy,
    eval_state,
    grad_state,
    sample_position,
    transition_dipole,
)
from rabisim.hydrogen import get_orbital

# exact values from symbolic radial integrals (sympy oracle, frozen)
DIPOLE_2P_1S = 128.0 * math.sqrt(2.0) / 243.0  # 0.7449355390278032
DIPOLE_9P_1S = 0.04736887318135524  # 2985984*sqrt(15)/244140625

ALL_STATES = [QuantumNumbers(n, l) for n in range(1, 10) for l in range(n)]


class TestBohrEnergy:
    def test_ground_state(self):
        assert bohr_energy(1) == -0.5

    def test_first_excited(self):
        assert bohr_energy(2) == -0.125

    def test_lyman_alpha_matches_resonance(self):
        assert bohr_energy(2) - bohr_energy(1) == 0.375

    @pytest.mark.parametrize("n", [0, -1])
    def test_invalid_n(self, n):
        with pytest.raises(ValueError):
            bohr_energy(n)


class TestQuantumNumbers:
    def test_l_bounds(self):
        with pytest.raises(ValueError):
            QuantumNumbers(2, 2)

    def test_m_restricted(self):
        with pytest.raises(ValueError):
            QuantumNumbers(2, 1, 1)


class TestEvalState:
    def test_1s_at_origin(self):
        assert eval_state(QuantumNumbers(1, 0), [0.0, 0.0, 0.0]) == pytest.approx(
            1.0 / math.sqrt(math.pi), rel=1e-9
        )

    def test_2p_node_at_origin(self):
        assert eval_state(QuantumNumbers(2, 1), [0.0, 0.0, 0.0]) == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("qn", ALL_STATES, ids=str)
    def test_normalization_by_quadrature(self, qn):
        # independent oracle: radial quadrature times exact Gauss-Legendre
        # angular integral of Y_l0^2
        orb = get_orbital(qn)
        radial, _ = integrate.quad(
            lambda r: (orb.radial(r) * r) ** 2, 0, 40.0 * qn.n**2, limit=300
        )
        mu, w = np.polynomial.legendre.leggauss(qn.l + 2)
        from scipy.special import eval_legendre

        c = (2 * qn.l + 1) / (4.0 * math.pi)
        angular = 2.0 * math.pi * c * float(np.sum(w * eval_legendre(qn.l, mu) ** 2))
        assert radial * angular == pytest.approx(1.0, abs=1e-8)

    def test_orthogonality_1s_2p(self):
        # the overlap must vanish through the angular integral
        o1, o2 = get_orbital(QuantumNumbers(1, 0)), get_orbital(QuantumNumbers(2, 1))
        mu, w = np.polynomial.legendre.leggauss(6)

        def integrand(r):
            y1 = math.sqrt(1 / (4 * math.pi))
            y2 = math.sqrt(3 / (4 * math.pi))
            ang = 2 * math.pi * y1 * y2 * float(np.sum(w * mu))
            return o1.radial(r) * o2.radial(r) * r**2 * ang

        overlap, _ = integrate.quad(integrand, 0, 200, limit=200)
        assert abs(overlap) < 1e-8


class TestGradState:
    def test_1s_on_z_axis(self):
        g = grad_state(QuantumNumbers(1, 0), [0.0, 0.0, 1.0])
        expect = -math.exp(-1.0) / math.sqrt(math.pi)
        assert g[0] == 0.0 and g[1] == 0.0
        assert g[2] == pytest.approx(expect, rel=1e-12)

    @pytest.mark.parametrize("qn", [QuantumNumbers(2, 1), QuantumNumbers(9, 1)], ids=str)
    def test_x_component_vanishes_on_axis(self, qn):
        g = grad_state(qn, [0.0, 0.0, 2.0])
        assert g[0] == 0.0 and g[1] == 0.0

    @pytest.mark.parametrize(
        "qn",
        [QuantumNumbers(1, 0), QuantumNumbers(2, 1), QuantumNumbers(9, 1), QuantumNumbers(9, 8)],
        ids=str,
    )
    def test_against_finite_differences(self, qn, rng):
        h = 1e-5
        for _ in range(100):
            r = rng.uniform(0.1, 4.0 * qn.n**2)
            direction = rng.standard_normal(3)
            x = r * direction / np.linalg.norm(direction)
            g = grad_state(qn, x)
            fd = np.empty(3)
            for k in range(3):
                step = np.zeros(3)
                step[k] = h
                fd[k] = (eval_state(qn, x + step) - eval_state(qn, x - step)) / (2 * h)
            scale = max(np.linalg.norm(g), np.linalg.norm(fd), 1e-12)
            assert np.linalg.norm(g - fd) / scale < 1e-5


class TestTransitionDipole:
    def test_2p_1s_analytic(self):
        qn2p, qn1s = QuantumNumbers(2, 1), QuantumNumbers(1, 0)
        assert transition_dipole(qn2p, qn1s) == pytest.approx(DIPOLE_2P_1S, abs=1e-10)

    def test_9p_1s_analytic(self):
        assert transition_dipole(QuantumNumbers(9, 1), QuantumNumbers(1, 0)) == pytest.approx(
            DIPOLE_9P_1S, abs=1e-10
        )

    def test_parity_forbidden_diagonal(self):
        qn = QuantumNumbers(1, 0)
        assert transition_dipole(qn, qn) == 0.0

    @pytest.mark.parametrize(
        "a,b",
        [
            (QuantumNumbers(2, 1), QuantumNumbers(1, 0)),
            (QuantumNumbers(9, 1), QuantumNumbers(1, 0)),
            (QuantumNumbers(3, 2), QuantumNumbers(2, 1)),
        ],
    )
    def test_symmetric_for_real_wavefunctions(self, a, b):
        assert transition_dipole(a, b) == pytest.approx(transition_dipole(b, a), abs=1e-10)


class TestSamplePosition:
    @pytest.mark.parametrize("qn", [QuantumNumbers(1, 0), QuantumNumbers(9, 1)], ids=str)
    def test_radial_ks(self, qn, rng):
        n_samp = 10_000
        radii = np.array([np.linalg.norm(sample_position(qn, rng)) for _ in range(n_samp)])
        orb = get_orbital(qn)

        grid = np.linspace(0.0, 6.0 * qn.n**2, 20_001)
        pdf = (np.array([orb.radial(r) for r in grid]) * grid) ** 2
        cdf_grid = integrate.cumulative_simpson(pdf, x=grid, initial=0.0)
        cdf_grid /= cdf_grid[-1]

        stat = kstest(radii, lambda x: np.interp(x, grid, cdf_grid)).statistic
        # 1% critical value for the one-sample KS statistic
        assert stat < 1.628 / math.sqrt(n_samp)

    def test_1s_mean_radius(self, rng):
        qn = QuantumNumbers(1, 0)
        radii = [np.linalg.norm(sample_position(qn, rng)) for _ in range(20_000)]
        # <r> = 3/2 for the ground state, sd(r) = sqrt(3)/2
        assert np.mean(radii) == pytest.approx(1.5, abs=5 * math.sqrt(0.75 / 20_000))

    def test_1s_mean_z_vanishes(self, rng):
        qn = QuantumNumbers(1, 0)
        z = [sample_position(qn, rng)[2] for _ in range(20_000)]
        assert abs(np.mean(z)) < 5 * np.std(z) / math.sqrt(20_000)

    def test_9p_reaches_large_radii(self, rng):
        qn = QuantumNumbers(9, 1)
        radii = [np.linalg.norm(sample_position(qn, rng)) for _ in range(2000)]
        assert max(radii) > 150.0
        assert max(radii) <= 6.0 * 81.0
