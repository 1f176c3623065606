"""Hydrogen eigenstates with m = 0: energies, wavefunctions, gradients,
transition dipole moments and |phi|^2 position sampling.

All quantities are in atomic units (hbar = m_e = e = 1, lengths in Bohr
radii, energies in Hartree). Only m = 0 states are supported; the
polarization axis is z throughout, so the relevant dipole matrix element
is <plus| z |minus>.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial import legendre as npleg
from scipy import integrate, special
from scipy.interpolate import PchipInterpolator

__all__ = [
    "QuantumNumbers",
    "LevelPair",
    "Orbital",
    "bohr_energy",
    "eval_state",
    "grad_state",
    "transition_dipole",
    "sample_position",
    "make_level_pair",
]

# Guard radius for evaluating gradients at the origin: s-state gradients
# have a direction-dependent limit there, so we nudge onto the +z axis.
_R_FLOOR = 1e-12


@dataclass(frozen=True)
class QuantumNumbers:
    """Hydrogen state labels (n, l, m) with m restricted to 0."""

    n: int
    l: int
    m: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"principal quantum number must be >= 1, got {self.n}")
        if not 0 <= self.l < self.n:
            raise ValueError(f"need 0 <= l < n, got l={self.l}, n={self.n}")
        if self.m != 0:
            raise ValueError("only m = 0 states are supported")

    def label(self) -> str:
        letters = "spdfghikl"
        return f"{self.n}{letters[self.l] if self.l < len(letters) else self.l}"


@dataclass(frozen=True)
class LevelPair:
    """Two-level reduction of the hydrogen atom.

    ``nu`` is the resonance angular frequency E_plus - E_minus (Hartree,
    hbar = 1) and ``P`` the transition dipole moment <plus| z |minus>.
    """

    minus: QuantumNumbers
    plus: QuantumNumbers
    E_minus: float
    E_plus: float
    nu: float
    P: float

    def __post_init__(self):
        if not self.E_plus > self.E_minus:
            raise ValueError("E_plus must exceed E_minus")


def bohr_energy(n: int) -> float:
    """Hydrogen level energy -1/(2 n^2) in Hartree."""
    if n < 1:
        raise ValueError(f"principal quantum number must be >= 1, got {n}")
    return -0.5 / (n * n)


def make_level_pair(minus: QuantumNumbers, plus: QuantumNumbers) -> LevelPair:
    """Build a LevelPair with derived energies, resonance frequency and dipole."""
    e_minus = bohr_energy(minus.n)
    e_plus = bohr_energy(plus.n)
    return LevelPair(
        minus=minus,
        plus=plus,
        E_minus=e_minus,
        E_plus=e_plus,
        nu=e_plus - e_minus,
        P=transition_dipole(plus, minus),
    )


def _radial_norm(n: int, l: int) -> float:
    # sqrt((2/n)^3 (n-l-1)! / (2n (n+l)!))
    return math.sqrt(
        (2.0 / n) ** 3 * math.factorial(n - l - 1) / (2.0 * n * math.factorial(n + l))
    )


@lru_cache(maxsize=None)
def _orbital_tables(n: int, l: int):
    """Precomputed polynomial coefficient tuples for one (n, l) orbital.

    Returns (K, lag, dlag, leg, dleg) where ``lag`` are the coefficients of
    the associated Laguerre factor L_{n-l-1}^{2l+1}(u), u = 2r/n, in
    descending powers (Horner order), and ``leg`` those of P_l(mu). K folds
    the radial normalization together with the Y_l0 angular constant.
    """
    lag_poly = special.genlaguerre(n - l - 1, 2 * l + 1)
    lag = tuple(float(c) for c in lag_poly.coeffs)
    dlag = tuple(float(c) for c in lag_poly.deriv().coeffs) if len(lag) > 1 else (0.0,)
    leg_basis = np.zeros(l + 1)
    leg_basis[l] = 1.0
    leg = tuple(float(c) for c in npleg.leg2poly(leg_basis)[::-1])
    dleg = tuple(float(c) for c in np.polyder(np.array(leg))) if l > 0 else (0.0,)
    c_ang = math.sqrt((2 * l + 1) / (4.0 * math.pi))
    return _radial_norm(n, l) * c_ang, lag, dlag, leg, dleg


def _horner(coeffs, x: float) -> float:
    acc = 0.0
    for c in coeffs:
        acc = acc * x + c
    return acc


class Orbital:
    """Fast scalar evaluator for one hydrogen m=0 orbital.

    Built once per (n, l) and reused inside trajectory integration loops;
    methods take raw Cartesian coordinates and return plain floats.
    """

    __slots__ = ("qn", "n", "l", "K", "lag", "dlag", "leg", "dleg")

    def __init__(self, qn: QuantumNumbers):
        self.qn = qn
        self.n = qn.n
        self.l = qn.l
        self.K, self.lag, self.dlag, self.leg, self.dleg = _orbital_tables(qn.n, qn.l)

    def radial(self, r: float) -> float:
        """R_nl(r), normalized so that int r^2 R^2 dr = 1."""
        u = 2.0 * r / self.n
        val = math.exp(-r / self.n) * u**self.l * _horner(self.lag, u)
        return val * self.K / math.sqrt((2 * self.l + 1) / (4.0 * math.pi))

    def value(self, x: float, y: float, z: float) -> float:
        r = math.sqrt(x * x + y * y + z * z)
        if r < _R_FLOOR:
            r = _R_FLOOR
            z = r
        u = 2.0 * r / self.n
        f = self.K * math.exp(-r / self.n) * u**self.l * _horner(self.lag, u)
        return f * _horner(self.leg, z / r)

    def value_and_grad(self, x: float, y: float, z: float):
        """Returns (phi, gx, gy, gz) at the point (x, y, z)."""
        n, l = self.n, self.l
        r = math.sqrt(x * x + y * y + z * z)
        if r < _R_FLOOR:
            # convention: evaluate the one-sided limit along +z
            r = _R_FLOOR
            x = y = 0.0
            z = r
        u = 2.0 * r / n
        expf = self.K * math.exp(-r / n)
        L = _horner(self.lag, u)
        Lp = _horner(self.dlag, u)
        ul = u**l
        f = expf * ul * L
        # df/dr; the u^(l-1) factor is finite for all supported l at u -> 0
        fp = expf * (-ul * L / n + (2.0 / n) * (ul * Lp + (l * u ** (l - 1) * L if l > 0 else 0.0)))
        mu = z / r
        P = _horner(self.leg, mu)
        Pp = _horner(self.dleg, mu)
        rad = fp * P / r
        ang = f * Pp
        zr3 = z / (r * r * r)
        gx = rad * x - ang * zr3 * x
        gy = rad * y - ang * zr3 * y
        gz = rad * z + ang * (1.0 / r - zr3 * z)
        return f * P, gx, gy, gz


@lru_cache(maxsize=None)
def get_orbital(qn: QuantumNumbers) -> Orbital:
    return Orbital(qn)


def eval_state(qn: QuantumNumbers, x) -> float:
    """Real amplitude R_nl(r) Y_l0(theta) at a Cartesian point (a.u.)."""
    return get_orbital(qn).value(float(x[0]), float(x[1]), float(x[2]))


def grad_state(qn: QuantumNumbers, x) -> np.ndarray:
    """Analytic Cartesian gradient of eval_state."""
    _, gx, gy, gz = get_orbital(qn).value_and_grad(float(x[0]), float(x[1]), float(x[2]))
    return np.array([gx, gy, gz])


def transition_dipole(plus: QuantumNumbers, minus: QuantumNumbers) -> float:
    """<plus| z |minus> by radial Gauss-Kronrod quadrature times the exact
    angular integral (polarization along z)."""
    op, om = get_orbital(plus), get_orbital(minus)
    lp, lm = plus.l, minus.l
    # angular factor: 2*pi * int Y_{lp,0}(mu) mu Y_{lm,0}(mu) dmu, exact by
    # Gauss-Legendre (integrand is a polynomial in mu of degree lp+lm+1)
    nodes, weights = np.polynomial.legendre.leggauss((lp + lm + 1) // 2 + 2)
    cp = math.sqrt((2 * lp + 1) / (4.0 * math.pi))
    cm = math.sqrt((2 * lm + 1) / (4.0 * math.pi))
    pl_p = special.eval_legendre(lp, nodes)
    pl_m = special.eval_legendre(lm, nodes)
    angular = 2.0 * math.pi * cp * cm * float(np.sum(weights * pl_p * nodes * pl_m))
    if abs(angular) < 1e-15:
        return 0.0
    n_max = max(plus.n, minus.n)
    val, err = integrate.quad(
        lambda r: op.radial(r) * om.radial(r) * r**3,
        0.0,
        40.0 * n_max * n_max,
        epsabs=1e-10,
        epsrel=1e-12,
        limit=400,
    )
    if err > 1e-8:
        raise RuntimeError(
            f"dipole quadrature did not converge for {plus}/{minus}: "
            f"estimate {val}, error bound {err}"
        )
    return angular * val


@lru_cache(maxsize=None)
def _radial_sampler(n: int, l: int) -> PchipInterpolator:
    """Inverse-CDF table for the radial density r^2 R_nl^2 on [0, 6 n^2]."""
    orb = Orbital(QuantumNumbers(n, l))
    r = np.linspace(0.0, 6.0 * n * n, 10_000)
    pdf = np.array([orb.radial(ri) ** 2 for ri in r]) * r**2
    cdf = integrate.cumulative_trapezoid(pdf, r, initial=0.0)
    cdf /= cdf[-1]
    # keep the CDF strictly increasing for interpolation
    keep = np.concatenate(([True], np.diff(cdf) > 0))
    return PchipInterpolator(cdf[keep], r[keep])


def sample_position(qn: QuantumNumbers, rng: np.random.Generator) -> np.ndarray:
    """Draw a position distributed as |phi_qn|^2.

    Radius by inverse CDF on a precomputed table, polar angle by rejection
    against the uniform envelope (|P_l(mu)| <= 1), azimuth uniform.
    """
    r = float(_radial_sampler(qn.n, qn.l)(rng.random()))
    leg = _orbital_tables(qn.n, qn.l)[3]
    while True:
        mu = rng.uniform(-1.0, 1.0)
        if rng.random() <= _horner(leg, mu) ** 2:
            break
    phi_az = rng.uniform(0.0, 2.0 * math.pi)
    s = math.sqrt(1.0 - mu * mu)
    return np.array([r * s * math.cos(phi_az), r * s * math.sin(phi_az), r * mu])
