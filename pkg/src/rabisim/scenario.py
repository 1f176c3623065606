"""Scenario configuration: parameter sets, presets, YAML load/save.

A scenario fixes the level pair, the coupling alpha, the coherent-state
gamma and the run controls. Everything else (P, nu, g, mean photon
number) is derived, never configured independently:

    g = alpha * P / sqrt(2 nu),      <N> = |gamma|^2.

The on-disk format is YAML with a schema marker (see SCHEMA).
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import numpy as np
import yaml

from .field import CoherentParams
from .hydrogen import LevelPair, QuantumNumbers, make_level_pair

__all__ = [
    "SCHEMA",
    "PRESETS",
    "ScenarioError",
    "ScenarioParams",
    "load_scenario",
    "save_scenario",
    "preset_names",
]

SCHEMA = "rabisim-scenario/1"

METHODS = ("jc", "fullquantum", "meanfield", "bohmian")


class ScenarioError(ValueError):
    """Invalid, inconsistent or unknown scenario input."""


@dataclass(frozen=True)
class ScenarioParams:
    name: str
    pair: LevelPair
    alpha: float
    gamma_r: float
    gamma_i: float = 0.0
    atom_init: str = "excited"
    t_max_2gt: float = 30.0  # horizon in units of 2 g t
    n_time: int = 600
    methods: tuple[str, ...] = ("jc", "meanfield", "bohmian")
    n_samples: int = 2500
    n_batches: int = 5
    seed: int = 0
    rtol: float = 1e-11
    atol: float = 1e-13

    def __post_init__(self):
        if self.atom_init not in ("excited", "ground"):
            raise ScenarioError(f"atom_init must be excited|ground, got {self.atom_init!r}")
        bad = [m for m in self.methods if m not in METHODS]
        if bad:
            raise ScenarioError(f"unknown methods {bad}; choose from {METHODS}")
        if self.n_samples < self.n_batches or self.n_batches < 2:
            raise ScenarioError("need n_samples >= n_batches >= 2")
        if self.n_samples % self.n_batches:
            raise ScenarioError("n_samples must be divisible by n_batches")
        if self.t_max_2gt <= 0 or self.n_time < 2:
            raise ScenarioError("need t_max_2gt > 0 and n_time >= 2")

    @property
    def g(self) -> float:
        return self.alpha * self.pair.P / math.sqrt(2.0 * self.pair.nu)

    @property
    def n_mean(self) -> float:
        return self.gamma_r**2 + self.gamma_i**2

    @property
    def coherent(self) -> CoherentParams:
        return CoherentParams(self.gamma_r, self.gamma_i, self.pair.nu)

    def time_grids(self) -> tuple[np.ndarray, np.ndarray]:
        """(t in a.u., 2 g t) grids, uniform in 2 g t."""
        two_g_t = np.linspace(0.0, self.t_max_2gt, self.n_time)
        return two_g_t / (2.0 * abs(self.g)), two_g_t

    def initial_qn(self) -> QuantumNumbers:
        return self.pair.plus if self.atom_init == "excited" else self.pair.minus


def _pair_1s2p() -> LevelPair:
    return make_level_pair(QuantumNumbers(1, 0), QuantumNumbers(2, 1))


def _pair_1s9p() -> LevelPair:
    return make_level_pair(QuantumNumbers(1, 0), QuantumNumbers(9, 1))


def _alpha_for_ratio(pair: LevelPair, g_over_nu: float) -> float:
    """alpha that realizes a requested g/nu."""
    return g_over_nu * pair.nu * math.sqrt(2.0 * pair.nu) / pair.P


def _build_presets() -> dict[str, ScenarioParams]:
    p12 = _pair_1s2p()
    presets: dict[str, ScenarioParams] = {}
    for gamma, horizon in [(0, 10.0), (1, 30.0), (2, 30.0), (3, 30.0), (5, 75.0), (10, 30.0)]:
        presets[f"table1-gamma{gamma}"] = ScenarioParams(
            name=f"table1-gamma{gamma}",
            pair=p12,
            alpha=0.005,
            gamma_r=float(gamma),
            t_max_2gt=horizon,
        )
    presets["table2"] = ScenarioParams(
        name="table2",
        pair=_pair_1s9p(),
        alpha=0.1,
        gamma_r=10.0,
        t_max_2gt=4.0,
    )
    for ratio, tag in [(0.02, "0.02"), (0.2, "0.2"), (0.5, "0.5"), (2.0, "2")]:
        presets[f"beyond-rwa-{tag}"] = ScenarioParams(
            name=f"beyond-rwa-{tag}",
            pair=p12,
            alpha=_alpha_for_ratio(p12, ratio),
            gamma_r=math.sqrt(10.0),
            atom_init="ground",
            t_max_2gt=40.0,
            methods=("fullquantum", "meanfield", "bohmian"),
        )
    return presets


PRESETS = _build_presets()


def preset_names() -> list[str]:
    return sorted(PRESETS)


_SCALARS = {
    "alpha": float,
    "gamma_r": float,
    "gamma_i": float,
    "atom_init": str,
    "t_max_2gt": float,
    "n_time": int,
    "n_samples": int,
    "n_batches": int,
    "seed": int,
    "rtol": float,
    "atol": float,
}


def save_scenario(params: ScenarioParams, path) -> None:
    doc = {
        "schema": SCHEMA,
        "name": params.name,
        "atom": {
            "minus": [params.pair.minus.n, params.pair.minus.l, params.pair.minus.m],
            "plus": [params.pair.plus.n, params.pair.plus.l, params.pair.plus.m],
        },
        "methods": list(params.methods),
        "derived": {
            "P": params.pair.P,
            "nu": params.pair.nu,
            "g": params.g,
            "n_mean": params.n_mean,
        },
        **{k: getattr(params, k) for k in _SCALARS},
    }
    Path(path).write_text(yaml.safe_dump(doc, sort_keys=False))


def load_scenario(name_or_path) -> ScenarioParams:
    """Resolve a preset name, or load and validate a YAML scenario file."""
    key = str(name_or_path)
    if key in PRESETS:
        return PRESETS[key]
    path = Path(key)
    if not path.exists():
        raise ScenarioError(f"no preset or file named {key!r} (presets: {preset_names()})")
    doc = yaml.safe_load(path.read_text())
    if not isinstance(doc, dict):
        raise ScenarioError(f"{path}: not a mapping")
    if doc.get("schema") != SCHEMA:
        raise ScenarioError(f"{path}: schema {doc.get('schema')!r}, expected {SCHEMA!r}")
    known = set(_SCALARS) | {"schema", "name", "atom", "methods", "derived"}
    unknown = set(doc) - known
    if unknown:
        raise ScenarioError(f"{path}: unknown keys {sorted(unknown)}")
    try:
        atom = doc["atom"]
        pair = make_level_pair(
            QuantumNumbers(*(int(v) for v in atom["minus"])),
            QuantumNumbers(*(int(v) for v in atom["plus"])),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ScenarioError(f"{path}: bad atom block: {exc}") from exc
    kwargs = {}
    for key_, conv in _SCALARS.items():
        if key_ in doc:
            kwargs[key_] = conv(doc[key_])
    if "methods" in doc:
        kwargs["methods"] = tuple(doc["methods"])
    try:
        params = ScenarioParams(name=str(doc.get("name", path.stem)), pair=pair, **kwargs)
    except (ScenarioError, TypeError) as exc:
        raise ScenarioError(f"{path}: {exc}") from exc
    # user-supplied derived values act as consistency checks, not inputs
    derived = doc.get("derived") or {}
    actual = {"P": pair.P, "nu": pair.nu, "g": params.g, "n_mean": params.n_mean}
    for key_, claimed in derived.items():
        if key_ not in actual:
            raise ScenarioError(f"{path}: unknown derived key {key_!r}")
        ref = actual[key_]
        if abs(float(claimed) - ref) > 1e-3 * max(1.0, abs(ref)):
            raise ScenarioError(
                f"{path}: derived {key_}={claimed} inconsistent with recomputed {ref:.6g}"
            )
    return params
