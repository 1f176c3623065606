"""Rabi-model population inversion: analytic Jaynes-Cummings, truncated-Fock
full-quantum, mean-field and Bohmian semi-classical dynamics, with Monte
Carlo ensemble averaging and batch-means confidence intervals."""

from .bohmian import BohmianState, BohmianTrajectory, bohmian_velocity, evolve_bohmian
from .ensemble import EnsembleResult, batch_ci, run_ensemble
from .field import CoherentParams, FieldSample, photon_pmf, sample_initial_field
from .hydrogen import (
    LevelPair,
    QuantumNumbers,
    bohr_energy,
    eval_state,
    grad_state,
    make_level_pair,
    sample_position,
    transition_dipole,
)
from .meanfield import (
    MeanFieldState,
    MeanFieldTrajectory,
    evolve_meanfield,
    inversion,
    meanfield_rhs,
)
from .quantum import FockState, evolve_full_quantum, fock_truncation, jc_inversion
from .scenario import PRESETS, ScenarioParams, load_scenario, save_scenario

__version__ = "0.1.0"
