"""
Split-step Fourier integration of i u_t + 1/2 Lap u + lam u ln|u|^2 = 0.

Both sub-flows are solved exactly:
  kinetic     u_hat <- exp(-i |k|^2 dt / 2) u_hat
  nonlinear   u     <- u exp(i lam dt ln(eps^2 + |u|^2))    (|u| is unchanged)
Strang composes half kinetic / full nonlinear / half kinetic, Lie one of each.
Negative dt integrates backward; each sub-flow is inverted exactly by -dt.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from ..infra.errors import AliasingOverflow, BoundaryLeak, NonFiniteState
from ..infra.logging import get_logger
from ..types import ComplexArray
from .config import SolverConfig
from .grid import Field, Grid

log = get_logger("solver")

_LANDING_TOL = 1e-12
_RECORD_TOL = 1e-9


@dataclass
class Trajectory:
    """Fields recorded at observer times, in the order they were reached."""

    times: list[float] = field(default_factory=list)
    fields: list[Field] = field(default_factory=list)

    def record(self, t: float, f: Field) -> None:
        self.times.append(float(t))
        self.fields.append(f)

    def __iter__(self) -> Iterator[tuple[float, Field]]:
        return iter(zip(self.times, self.fields))

    def __len__(self) -> int:
        return len(self.times)

    @property
    def final(self) -> Field:
        return self.fields[-1]

    def at(self, t: float) -> Field:
        """The field recorded at time t; times that were not observed raise KeyError."""
        gaps = np.abs(np.asarray(self.times) - t)
        k = int(np.argmin(gaps)) if gaps.size else -1
        if k < 0 or gaps[k] > _RECORD_TOL * max(1.0, abs(t)):
            raise KeyError(f"t={t} was not recorded")
        return self.fields[k]


class SplitStepSolver:
    def __init__(self, grid: Grid, cfg: SolverConfig):
        self.grid = grid
        self.cfg = cfg
        self._k2 = grid.k2
        self._mask = ~grid.high_band if cfg.dealias else None
        self._multipliers: dict[float, ComplexArray] = {}

    def _kinetic(self, tau: float) -> ComplexArray:
        """Spectral multiplier of the free flow over time tau."""
        m = self._multipliers.get(tau)
        if m is None:
            m = np.exp(-0.5j * tau * self._k2)
            if self._mask is not None:
                m = m * self._mask
            if len(self._multipliers) < 8:
                self._multipliers[tau] = m
        return m

    def _free(self, u: ComplexArray, tau: float) -> ComplexArray:
        return np.fft.ifftn(np.fft.fftn(u) * self._kinetic(tau))

    def _nonlinear(self, u: ComplexArray, dt: float) -> ComplexArray:
        cfg = self.cfg
        if cfg.lam == 0:
            return u
        rho = cfg.eps**2 + (u.real**2 + u.imag**2)
        return u * np.exp(1j * cfg.lam * dt * np.log(rho))

    def advance(self, u: ComplexArray, dt: float) -> ComplexArray:
        """One step on raw values, without monitoring."""
        if self.cfg.splitting == "strang":
            u = self._free(u, 0.5 * dt)
            u = self._nonlinear(u, dt)
            return self._free(u, 0.5 * dt)
        u = self._free(u, dt)
        return self._nonlinear(u, dt)

    def check(self, u: ComplexArray, t: float | None = None) -> None:
        if not np.all(np.isfinite(u)):
            raise NonFiniteState("field is not finite", t=t)
        density = u.real**2 + u.imag**2
        mass = float(density.sum())
        if mass == 0.0:
            return
        tol = self.cfg.tail_tol
        leak = float(density[self.grid.boundary_band].sum()) / mass
        if leak > tol:
            raise BoundaryLeak("mass reached the box boundary", t=t, fraction=leak)
        spec = np.abs(np.fft.fftn(u)) ** 2
        alias = float(spec[self.grid.high_band].sum() / spec.sum())
        if alias > tol:
            raise AliasingOverflow(
                "spectral mass in the top third of wavenumbers", t=t, fraction=alias
            )

    def step(self, f: Field) -> Field:
        u = self.advance(f.values, self.cfg.dt)
        self.check(u)
        return Field(self.grid, u)

    def integrate(
        self,
        f: Field,
        t0: float,
        t1: float,
        observers: Sequence[float] | None = None,
    ) -> Trajectory:
        traj = Trajectory()
        if t1 == t0:
            traj.record(t0, f)
            return traj

        direction = 1.0 if t1 > t0 else -1.0
        dt = direction * abs(self.cfg.dt)
        targets = _targets(t0, t1, observers, direction)
        if observers is None or any(abs(o - t0) <= _LANDING_TOL for o in observers):
            traj.record(t0, f)

        u = f.values
        t = t0
        every = self.cfg.monitor_every
        steps = 0
        for target in targets:
            n_full = int(np.floor((target - t) / dt * (1.0 + 1e-12)))
            start = t
            for k in range(1, n_full + 1):
                u = self.advance(u, dt)
                steps += 1
                if steps % every == 0:
                    self.check(u, start + k * dt)
            t = start + n_full * dt
            rest = target - t
            if abs(rest) > _LANDING_TOL * max(1.0, abs(target)):
                u = self.advance(u, rest)
                steps += 1
            t = target
            self.check(u, t)
            traj.record(t, Field(self.grid, u))
        log.debug("integrated %g -> %g in %d steps (%d records)", t0, t1, steps, len(traj))
        return traj


def _targets(t0: float, t1: float, observers, direction: float) -> list[float]:
    inside = []
    for o in (() if observers is None else observers):
        if (o - t0) * direction > _LANDING_TOL and (t1 - o) * direction >= -_LANDING_TOL:
            inside.append(float(o))
    inside = sorted(set(inside), key=lambda o: direction * o)
    if not inside or abs(inside[-1] - t1) > _LANDING_TOL:
        inside.append(float(t1))
    else:
        inside[-1] = float(t1)
    return inside


@lru_cache(maxsize=8)
def solver_for(grid: Grid, cfg: SolverConfig) -> SplitStepSolver:
    return SplitStepSolver(grid, cfg)


def step(f: Field, cfg: SolverConfig) -> Field:
    return solver_for(f.grid, cfg).step(f)


def integrate(
    f: Field,
    t0: float,
    t1: float,
    cfg: SolverConfig,
    observers: Sequence[float] | None = None,
) -> Trajectory:
    """Integrate from t0 to t1, landing exactly on every observer time and on t1.

    The trajectory holds t0 (when observed or no observers are given), every
    observer inside the interval and t1.
    """
    return solver_for(f.grid, cfg).integrate(f, t0, t1, observers)
