"""
Localized mass, momentum, energy and actions.

    M_j = int |u|^2 psi_j
    J_j = Im int conj(u) grad u psi_j
    E_j = 1/2 int |grad u|^2 psi_j - lam int |u|^2 (ln(eps^2 + |u|^2) - 1) psi_j
    S_j = E_j + (2 lam omega_j + |v_j|^2 / 2) M_j - v_j . J_j     (j >= 1)
    S_0 = E_0,   S_loc = sum_j S_j

Because psi_0 closes the partition, sum_j M_j is the total mass and S_loc is
E + sum_{j>=1} [(2 lam omega_j + |v_j|^2/2) M_j - v_j . J_j].
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..dynamics import GaussianParams, eval_gausson
from ..infra.errors import GridMismatch, InsufficientData, InsufficientSamples
from ..infra.logging import get_logger
from ..multisoliton import DecayFit, fit_gaussian_decay
from ..solver import Field, SolverConfig, gradient, norms, sample
from ..solver.norms import potential_density
from ..types import RealArray
from .partition import Partition

log = get_logger("localized")


@dataclass(frozen=True, eq=False)
class LocalizedReport:
    """Per-piece quantities; index 0 is the residual piece psi_0."""

    t: float
    mass: RealArray
    momentum: RealArray
    energy: RealArray
    action: RealArray

    @property
    def total_action(self) -> float:
        return float(self.action.sum())

    @property
    def total_mass(self) -> float:
        return float(self.mass.sum())

    @property
    def total_energy(self) -> float:
        return float(self.energy.sum())

    def row(self) -> list[float]:
        out = [self.t, self.total_action]
        for j in range(self.mass.shape[0]):
            out += [self.mass[j], *self.momentum[j], self.energy[j], self.action[j]]
        return out

    @staticmethod
    def columns(n_members: int, dim: int) -> list[str]:
        cols = ["t", "S_loc"]
        for j in range(n_members + 1):
            cols += [f"M_{j}", *[f"J_{j}_{i}" for i in range(dim)], f"E_{j}", f"S_{j}"]
        return cols


def localized_quantities(
    field: Field,
    partition: Partition,
    members: Sequence[GaussianParams],
    cfg: SolverConfig,
) -> LocalizedReport:
    if field.grid != partition.grid:
        raise GridMismatch("field and partition live on different grids")
    g = field.grid
    u = field.values
    rho = u.real**2 + u.imag**2
    grad = gradient(u, g)
    grad_sq = np.sum(grad.real**2 + grad.imag**2, axis=0)
    current = np.imag(np.conj(u)[None] * grad)
    potential = potential_density(u, cfg.lam, cfg.eps)

    psi = partition.psi
    axes = tuple(range(1, psi.ndim))
    mass = g.cell * np.sum(psi * rho[None], axis=axes)
    momentum = np.stack([g.cell * np.sum(psi * c[None], axis=axes) for c in current], axis=-1)
    energy = g.cell * np.sum(psi * (0.5 * grad_sq + potential)[None], axis=axes)

    action = energy.copy()
    for j, p in enumerate(members, start=1):
        shift = 2.0 * p.lam * p.omega + 0.5 * float(p.v @ p.v)
        action[j] += shift * mass[j] - float(p.v @ momentum[j])
    return LocalizedReport(
        t=partition.time, mass=mass, momentum=momentum, energy=energy, action=action
    )


@dataclass(frozen=True, eq=False)
class SlowVariationReport:
    times: RealArray
    actions: RealArray
    derivative: RealArray
    envelope: RealArray
    envelope_constant: float
    noise_floor: float
    energy_drift: float
    fit: DecayFit | None

    def table(self) -> tuple[list[str], RealArray]:
        cols = ["t", "S_loc", "dS_dt", "envelope"]
        return cols, np.column_stack([self.times, self.actions, self.derivative, self.envelope])


def slow_variation_report(
    times: Sequence[float],
    reports: Sequence[LocalizedReport],
    rate: float,
    v_star: float,
    t_offset: float = 0.0,
    energies: Sequence[float] | None = None,
) -> SlowVariationReport:
    """Centered differences of S_loc against C exp(-rate (v_* t)^2 / 4).

    ``t`` in the envelope is measured from ``t_offset``. C is the smallest
    constant for which the envelope holds over the samples; samples within
    the rounding noise of S_loc are left out of C and of the decay fit.
    """
    t = np.asarray(times, dtype=float)
    s = np.array([r.total_action for r in reports])
    if t.size < 3:
        raise InsufficientSamples("centered differences need three samples", samples=int(t.size))
    if np.any(np.diff(t) <= 0):
        raise InsufficientSamples("sample times must be increasing")

    ds = np.gradient(s, t)
    rel_t = t - t_offset
    env = np.exp(-rate * (v_star * rel_t) ** 2 / 4.0)
    dt = float(np.min(np.diff(t)))
    noise = 8.0 * np.finfo(float).eps * float(np.max(np.abs(s))) / dt
    above = np.abs(ds) > noise
    with np.errstate(divide="ignore", over="ignore"):
        c = float(np.max(np.abs(ds[above]) / env[above])) if np.any(above) else 0.0

    fit = None
    try:
        fit = fit_gaussian_decay(rel_t, np.abs(ds), floor=noise / 10.0)
    except InsufficientData:
        log.info("dS_loc/dt stays within rounding noise on %d samples", int(t.size))

    drift = 0.0
    if energies is not None:
        e = np.asarray(energies, dtype=float)
        drift = float(np.max(np.abs(e - e[0])) / max(abs(e[0]), 1e-300))
    log.info("slow variation: C=%.3e over %d samples, energy drift %.2e", c, t.size, drift)
    return SlowVariationReport(
        times=t,
        actions=s,
        derivative=ds,
        envelope=c * env,
        envelope_constant=c,
        noise_floor=noise,
        energy_drift=drift,
        fit=fit,
    )


@dataclass(frozen=True, eq=False)
class ActionDefectReport:
    t: float
    defects: RealArray
    normalized: RealArray


def gausson_fields(members: Sequence[GaussianParams], t: float, grid) -> list[Field]:
    pts = grid.points
    return [
        sample(lambda _x, p=p: eval_gausson(p.omega, p.x0, p.v, p.theta, p.lam, t, pts), grid)
        for p in members
    ]


def action_defect_report(
    members: Sequence[GaussianParams],
    partition: Partition,
    cfg: SolverConfig,
) -> ActionDefectReport:
    """Localized actions of the Gausson sum against those of each Gausson alone.

    Entry j >= 1 is |S_j(sum G) - S_j(G_j)|, entry 0 is |S_0(sum G)|; the
    normalized copy is scaled by t e^{lam (v_* t)^2 / 2}.
    """
    t_abs = partition.time
    singles = gausson_fields(members, t_abs, partition.grid)
    total = singles[0]
    for f in singles[1:]:
        total = total + f
    whole = localized_quantities(total, partition, members, cfg)
    defects = np.empty(len(members) + 1)
    defects[0] = abs(whole.action[0])
    for j, f in enumerate(singles, start=1):
        alone = localized_quantities(f, partition, members, cfg)
        defects[j] = abs(whole.action[j] - alone.action[j])
    lam, t = cfg.lam, partition.t
    scale = t * np.exp(lam * (partition.v_star * t) ** 2 / 2.0)
    return ActionDefectReport(t=t, defects=defects, normalized=defects * scale)


def total_energy(field: Field, cfg: SolverConfig) -> float:
    return norms(field, cfg).energy
