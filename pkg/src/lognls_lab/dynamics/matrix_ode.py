"""
Matrix ODE of general Gaussian solutions.

    dA/dt = -i A^2 + 2 i lam Re A,        A(0) = A_in  (complex symmetric, Re A_in > 0)
    dPhi/dt = 1/2 Tr Re A - lam/2 ln(det Re A / det Re A_in) - d lam,   Phi(0) = 0

A is carried as its upper triangle, so the integrated matrix is symmetric by
construction. Integration uses scipy's embedded Dormand-Prince pairs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.integrate import cumulative_simpson, solve_ivp

from ..infra.errors import DomainViolation, GridTooCoarse, PositivityLost, StepUnderflow
from ..infra.logging import get_logger
from ..types import ComplexArray, RealArray
from .params import GaussianState

log = get_logger("dynamics")

DEFAULT_TOL = 1e-10


def _triu(d: int) -> tuple[np.ndarray, np.ndarray]:
    return np.triu_indices(d)


def _unpack(y: np.ndarray, d: int) -> ComplexArray:
    iu = _triu(d)
    A = np.zeros((d, d), dtype=complex)
    A[iu] = y
    A[iu[1], iu[0]] = y
    return A


def _vector_field(lam: float, d: int, det_in: float):
    iu = _triu(d)
    m = len(iu[0])

    def rhs(_t: float, y: np.ndarray) -> np.ndarray:
        A = _unpack(y[:m], d)
        re = A.real
        dA = -1j * (A @ A) + 2j * lam * re
        dphi = 0.5 * np.trace(re) - 0.5 * lam * np.log(np.linalg.det(re) / det_in) - d * lam
        out = np.empty(m + 1, dtype=complex)
        out[:m] = dA[iu]
        out[m] = dphi
        return out

    def min_eig(_t: float, y: np.ndarray) -> float:
        return float(np.linalg.eigvalsh(_unpack(y[:m], d).real)[0])

    min_eig.terminal = True  # type: ignore[attr-defined]
    min_eig.direction = -1  # type: ignore[attr-defined]
    return rhs, min_eig


def evolve_matrix_ode(
    a_in: ComplexArray,
    lam: float,
    times: Sequence[float],
    tol: float = DEFAULT_TOL,
    method: str = "DOP853",
) -> list[GaussianState]:
    """Integrate the matrix ODE and return the states at ``times`` (times[0] must be 0)."""
    a_in = np.atleast_2d(np.asarray(a_in, dtype=complex))
    d = a_in.shape[0]
    ts = np.asarray(times, dtype=float)
    if ts.ndim != 1 or ts.size == 0 or ts[0] != 0.0:
        raise DomainViolation("times must start at 0", first=float(ts[0]) if ts.size else None)
    if np.any(np.diff(ts) <= 0):
        raise DomainViolation("times must be strictly increasing")

    min_eig_in = float(np.linalg.eigvalsh(a_in.real)[0])
    if min_eig_in <= 0:
        raise DomainViolation("Re A_in must be positive definite", min_eig=min_eig_in)

    det_in = float(np.linalg.det(a_in.real))
    iu = _triu(d)
    y0 = np.concatenate([a_in[iu], [0.0 + 0.0j]])

    if ts.size == 1:
        ys = y0[:, None]
    else:
        rhs, min_eig = _vector_field(lam, d, det_in)
        sol = solve_ivp(
            rhs, (0.0, float(ts[-1])), y0, method=method, t_eval=ts,
            rtol=tol, atol=tol, events=[min_eig],
        )
        if sol.status == -1:
            raise StepUnderflow(f"matrix ODE integration failed: {sol.message}")
        if sol.status == 1:
            raise PositivityLost("Re A lost positive definiteness", t=float(sol.t_events[0][0]))
        ys = sol.y

    m = len(iu[0])
    states: list[GaussianState] = []
    lo, hi = np.inf, -np.inf
    for k, t in enumerate(ts):
        A = _unpack(ys[:m, k], d)
        eig = np.linalg.eigvalsh(A.real)
        if eig[0] <= 0:
            raise PositivityLost(
                "Re A lost positive definiteness", t=float(t), min_eig=float(eig[0])
            )
        lo, hi = min(lo, float(eig[0])), max(hi, float(eig[-1]))
        states.append(
            GaussianState(
                t=float(t),
                A=A,
                phi=float(ys[m, k].real),
                det_ratio=float(np.linalg.det(A.real) / det_in),
                spectrum_bounds=(lo, hi),
            )
        )
    log.debug("matrix ODE d=%d lam=%g: %d states to t=%g", d, lam, len(states), ts[-1])
    return states


def phase_integral(states: Sequence[GaussianState], lam: float) -> RealArray:
    """Phi on the state grid by composite Simpson; Phi(t0) is taken from the first state."""
    if len(states) < 3:
        raise GridTooCoarse("phase quadrature needs at least 3 states", samples=len(states))
    t = np.array([s.t for s in states])
    d = states[0].A.shape[0]
    integrand = np.array(
        [0.5 * np.trace(s.A.real) - 0.5 * lam * np.log(s.det_ratio) - d * lam for s in states]
    )
    return states[0].phi + cumulative_simpson(integrand, x=t, initial=0.0)


def tensor_product_check(
    diagonal: Sequence[complex], lam: float, times: Sequence[float], tol: float = DEFAULT_TOL
) -> float:
    """Max deviation between diag(a_1..a_d) evolved jointly and each a_i evolved in 1D.

    The matrix flow maps diagonal data to diagonal data, so off-diagonal
    entries enter the deviation too.
    """
    diagonal = np.asarray(diagonal, dtype=complex)
    joint = evolve_matrix_ode(np.diag(diagonal), lam, times, tol)
    worst = 0.0
    for i, a in enumerate(diagonal):
        single = evolve_matrix_ode(np.array([[a]]), lam, times, tol)
        for s_joint, s_1d in zip(joint, single):
            worst = max(worst, abs(s_joint.A[i, i] - s_1d.A[0, 0]))
    for s in joint:
        off = s.A - np.diag(np.diag(s.A))
        worst = max(worst, float(np.max(np.abs(off))))
    return worst


@dataclass(frozen=True)
class SpectrumScan:
    """Extremes of Re A(t) and of the amplitude factor over a trajectory."""

    min_eig: float
    max_eig: float
    min_log_amp: float
    max_log_amp: float


def scan_trajectory(
    a_in: ComplexArray, lam: float, t_end: float, samples: int = 2001, tol: float = DEFAULT_TOL
) -> SpectrumScan:
    """Dense scan of [0, t_end] used for sigma_minus and eps0 of general members.

    log_amp is 1/4 ln det_ratio, the time-dependent part of the member's
    log-amplitude.
    """
    times = np.linspace(0.0, max(t_end, 1e-12), max(samples, 2))
    states = evolve_matrix_ode(a_in, lam, times, tol)
    log_amp = np.array([0.25 * np.log(s.det_ratio) for s in states])
    lo, hi = states[-1].spectrum_bounds
    return SpectrumScan(lo, hi, float(log_amp.min()), float(log_amp.max()))


def matrix_trajectory_table(states: Sequence[GaussianState]) -> tuple[list[str], RealArray]:
    """CSV columns t, Re/Im of A row-major, phi, det_ratio."""
    d = states[0].A.shape[0]
    cols = ["t"]
    for i in range(d):
        for j in range(d):
            cols += [f"re_a{i}{j}", f"im_a{i}{j}"]
    cols += ["phi", "det_ratio"]
    rows = []
    for s in states:
        flat = s.A.reshape(-1)
        row = [s.t]
        for z in flat:
            row += [z.real, z.imag]
        rows.append(row + [s.phi, s.det_ratio])
    return cols, np.array(rows)
