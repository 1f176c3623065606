"""Coherent-state description of the field mode.

The mode is parameterized by gamma = gamma_r + i*gamma_i with mean photon
number |gamma|^2. Its position-representation density is a Gaussian in Q
with mean gamma_r*sqrt(2/nu) and variance 1/(2 nu); the velocity is the
deterministic value sqrt(2 nu)*gamma_i (atomic units, hbar = 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import poisson

__all__ = ["CoherentParams", "FieldSample", "photon_pmf", "sample_initial_field"]


@dataclass(frozen=True)
class CoherentParams:
    gamma_r: float
    gamma_i: float
    nu: float

    def __post_init__(self):
        if self.nu <= 0:
            raise ValueError(f"field frequency must be positive, got {self.nu}")

    @property
    def n_mean(self) -> float:
        """Mean photon number |gamma|^2 (always derived, never configured)."""
        return self.gamma_r**2 + self.gamma_i**2


@dataclass(frozen=True)
class FieldSample:
    Q: float
    Qdot: float


def photon_pmf(n_mean: float, n) -> float | np.ndarray:
    """Poisson photon-number probability n_mean^n e^-n_mean / n!."""
    if n_mean < 0:
        raise ValueError("mean photon number must be >= 0")
    return poisson.pmf(n, n_mean)


def sample_initial_field(cp: CoherentParams, rng: np.random.Generator) -> FieldSample:
    """Draw (Q, Qdot) from the coherent-state initial distribution.

    Q is Gaussian; Qdot is a delta distribution, implemented as a
    deterministic assignment (bit-exact zero for real gamma).
    """
    mean = cp.gamma_r * math.sqrt(2.0 / cp.nu)
    sigma = math.sqrt(0.5 / cp.nu)
    q = mean + sigma * rng.standard_normal()
    return FieldSample(Q=q, Qdot=math.sqrt(2.0 * cp.nu) * cp.gamma_i)
