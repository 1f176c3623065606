"""Bohmian semi-classical dynamics.

The amplitude equations are identical to the mean-field ones, but the
classical field mode is driven by the actual particle position X(t),
which follows the two-level guidance velocity

    dX/dt = Im[(C+ grad(phi+) + C- grad(phi-)) / (C+ phi+ + C- phi-)]

(hbar = m = 1). The guidance velocity diverges near nodes of the guiding
wave; integration guards on |D|^2 and retries with reduced steps before
flagging a trajectory as node-trapped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import DOP853

from .hydrogen import LevelPair, get_orbital
from .meanfield import DEFAULT_ATOL, DEFAULT_RTOL, IntegrationError

__all__ = [
    "BohmianState",
    "BohmianTrajectory",
    "NodeProximity",
    "bohmian_velocity",
    "evolve_bohmian",
]

NODE_GUARD = 1e-30  # threshold on |D|^2 below which a step is rejected
RETRY_BUDGET = 12


class NodeProximity(Exception):
    """Signal raised inside the RHS when |D|^2 falls below the node guard."""

    def __init__(self, t: float, d2: float):
        super().__init__(f"|D|^2 = {d2:.3e} below node guard at t = {t:.6g}")
        self.t = t
        self.d2 = d2


@dataclass
class BohmianState:
    c_plus: complex
    c_minus: complex
    X: np.ndarray
    Q: float
    Qdot: float


@dataclass
class BohmianTrajectory:
    t: np.ndarray
    c_plus: np.ndarray
    c_minus: np.ndarray
    X: np.ndarray  # shape (T, 3)
    Q: np.ndarray
    Qdot: np.ndarray
    W: np.ndarray
    flagged: bool = False
    flag_time: float | None = None
    flag_reason: str = ""

    def norm(self) -> np.ndarray:
        return np.abs(self.c_plus) ** 2 + np.abs(self.c_minus) ** 2


def bohmian_velocity(c_plus: complex, c_minus: complex, pair: LevelPair, X) -> np.ndarray:
    """Guidance velocity Im(N conj(D)) / |D|^2 at position X.

    For real orbitals this reduces to
    Im(C+ conj(C-)) (phi- grad(phi+) - phi+ grad(phi-)) / |D|^2.
    """
    op, om = get_orbital(pair.plus), get_orbital(pair.minus)
    x, y, z = float(X[0]), float(X[1]), float(X[2])
    phi_p, gpx, gpy, gpz = op.value_and_grad(x, y, z)
    phi_m, gmx, gmy, gmz = om.value_and_grad(x, y, z)
    dr = c_plus.real * phi_p + c_minus.real * phi_m
    di = c_plus.imag * phi_p + c_minus.imag * phi_m
    d2 = dr * dr + di * di
    if d2 < NODE_GUARD:
        raise NodeProximity(0.0, d2)
    pref = (c_plus.imag * c_minus.real - c_plus.real * c_minus.imag) / d2
    return pref * np.array(
        [phi_m * gpx - phi_p * gmx, phi_m * gpy - phi_p * gmy, phi_m * gpz - phi_p * gmz]
    )


def _rhs_factory(pair: LevelPair, alpha: float, guard: float):
    """Interaction-picture RHS (A+- = exp(i E+- t) C+-), state vector
    y = (Re A+, Im A+, Re A-, Im A-, x, y, z, Q, Qdot).

    With R + iI = A+ conj(A-), the lab-frame bilinears needed by the
    guidance velocity and the field source are
        Re(C+ conj(C-)) = cos(nu t) R + sin(nu t) I,
        Im(C+ conj(C-)) = cos(nu t) I - sin(nu t) R.
    """
    op, om = get_orbital(pair.plus), get_orbital(pair.minus)
    nu, nu2 = pair.nu, pair.nu * pair.nu
    a_p = alpha * pair.P

    def rhs(t, y):
        rp, ip, rm, im, x, yy, z, q, qd = y
        c = math.cos(nu * t)
        s = math.sin(nu * t)
        phi_p, gpx, gpy, gpz = op.value_and_grad(x, yy, z)
        phi_m, gmx, gmy, gmz = om.value_and_grad(x, yy, z)
        R = rp * rm + ip * im
        I = ip * rm - rp * im
        d2 = (
            (rp * rp + ip * ip) * phi_p * phi_p
            + (rm * rm + im * im) * phi_m * phi_m
            + 2.0 * phi_p * phi_m * (c * R + s * I)
        )
        if d2 < guard:
            raise NodeProximity(t, d2)
        pref = (c * I - s * R) / d2
        w = a_p * q
        return (
            w * (s * rm + c * im),
            -w * (c * rm - s * im),
            w * (c * ip - s * rp),
            -w * (c * rp + s * ip),
            pref * (phi_m * gpx - phi_p * gmx),
            pref * (phi_m * gpy - phi_p * gmy),
            pref * (phi_m * gpz - phi_p * gmz),
            qd,
            -nu2 * q - alpha * z,
        )

    return rhs


def _pack(s: BohmianState) -> np.ndarray:
    return np.array(
        [
            s.c_plus.real,
            s.c_plus.imag,
            s.c_minus.real,
            s.c_minus.imag,
            float(s.X[0]),
            float(s.X[1]),
            float(s.X[2]),
            s.Q,
            s.Qdot,
        ]
    )


def evolve_bohmian(
    s0: BohmianState,
    pair: LevelPair,
    alpha: float,
    t_grid,
    rtol: float = DEFAULT_RTOL,
    atol: float = DEFAULT_ATOL,
    node_guard: float = NODE_GUARD,
    retry_budget: int = RETRY_BUDGET,
) -> BohmianTrajectory:
    """Integrate the Bohmian equations on t_grid with node-guard retries.

    On a node-guard trip the step is retried from the last accepted state
    with max_step reduced by 10x, up to ``retry_budget`` times per
    trajectory; beyond that the sample is flagged and the remaining grid
    points are NaN.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    rhs = _rhs_factory(pair, alpha, node_guard)
    n = len(t_grid)
    out = np.full((n, 9), np.nan)
    out[0] = _pack(s0)
    # lab frame -> interaction picture at t0
    a_p0 = (out[0, 0] + 1j * out[0, 1]) * np.exp(1j * pair.E_plus * t_grid[0])
    a_m0 = (out[0, 2] + 1j * out[0, 3]) * np.exp(1j * pair.E_minus * t_grid[0])
    out[0, 0], out[0, 1], out[0, 2], out[0, 3] = a_p0.real, a_p0.imag, a_m0.real, a_m0.imag
    flagged = False
    flag_time = None
    flag_reason = ""

    i = 1
    retries = 0
    max_step = np.inf
    try:
        solver = DOP853(rhs, t_grid[0], out[0], t_grid[-1], rtol=rtol, atol=atol)
    except NodeProximity as exc:
        # the initial state itself sits inside the node guard
        return _finish(out, t_grid, pair, True, t_grid[0], str(exc))
    while i < n and not flagged:
        if solver.status == "finished":
            break
        try:
            solver.step()
        except NodeProximity as exc:
            retries += 1
            if retries > retry_budget:
                flagged = True
                flag_time = solver.t
                flag_reason = str(exc)
                break
            max_step = (solver.h_abs if np.isfinite(solver.h_abs) else 1.0) / 10.0
            solver = DOP853(
                rhs, solver.t, solver.y, t_grid[-1], rtol=rtol, atol=atol, max_step=max_step
            )
            continue
        if solver.status == "failed":
            raise IntegrationError(f"Bohmian integration failed at t = {solver.t:.6g}")
        # after a clean step, relax any retry-imposed step cap
        if np.isfinite(max_step):
            max_step *= 2.0
            solver.max_step = max_step
            if max_step > 1e6:
                max_step = np.inf
                solver.max_step = max_step
        dense = solver.dense_output()
        while i < n and t_grid[i] <= solver.t + 1e-14:
            out[i] = dense(min(t_grid[i], solver.t))
            i += 1

    return _finish(out, t_grid, pair, flagged, flag_time, flag_reason)


def _finish(out, t_grid, pair, flagged, flag_time, flag_reason) -> BohmianTrajectory:
    """Convert the interaction-picture grid back to a lab-frame trajectory."""
    c_plus = (out[:, 0] + 1j * out[:, 1]) * np.exp(-1j * pair.E_plus * t_grid)
    c_minus = (out[:, 2] + 1j * out[:, 3]) * np.exp(-1j * pair.E_minus * t_grid)
    return BohmianTrajectory(
        t=t_grid,
        c_plus=c_plus,
        c_minus=c_minus,
        X=out[:, 4:7],
        Q=out[:, 7],
        Qdot=out[:, 8],
        W=np.abs(c_plus) ** 2 - np.abs(c_minus) ** 2,
        flagged=flagged,
        flag_time=flag_time,
        flag_reason=flag_reason,
    )
