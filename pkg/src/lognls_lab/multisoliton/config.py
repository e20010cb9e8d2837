"""
Configuration of a multi-soliton construction and its derived constants.

    v_*     = min_{j != k} |v_j - v_k|
    sigma_- = 1/2 inf over members and [0, max T_n] of min eig Re A_k(t)
    T_sep   = max_{k,j} (1/eps0 + |x_k - x_j|) / v_*

eps0 is the separation threshold of the superposition estimate, evaluated
with the width bounds of A_k(t)/2 and the spread of the effective
log-amplitudes omega_k + d/2 + 1/4 ln det_ratio_k(t).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from ..dynamics import GaussianParams, scan_trajectory
from ..infra.errors import ConfigInvalid
from ..inequalities import eps0
from ..solver import Grid
from ..types import RealArray

DEFAULT_FIT_GAP = 1.0
# breathing members enter the fit once every pair of centers is this many
# maximal widths (2 sigma_-)^(-1/2) apart for the rest of the ladder
FIT_SEPARATION_WIDTHS = 5.0
_FIT_START_POINTS = 4001
# margin around every center, in units of (2 sigma_-)^(-1/2)
BOX_MARGIN = 12.0


@dataclass(frozen=True)
class MemberBounds:
    lam_minus: float
    lam_plus: float
    log_amp_min: float
    log_amp_max: float


def member_bounds(p: GaussianParams, t_end: float) -> MemberBounds:
    """Width and log-amplitude ranges of one member over [0, t_end]."""
    base = p.omega + 0.5 * p.dim
    if p.is_gausson:
        return MemberBounds(p.lam, p.lam, base, base)
    scan = scan_trajectory(p.a_in, p.lam, t_end)
    return MemberBounds(
        lam_minus=0.5 * scan.min_eig,
        lam_plus=0.5 * scan.max_eig,
        log_amp_min=base + scan.min_log_amp,
        log_amp_max=base + scan.max_log_amp,
    )


@dataclass(frozen=True, eq=False)
class MultiConfig:
    members: tuple[GaussianParams, ...]
    t_n_list: tuple[float, ...]
    t_obs: float
    v_star: float
    sigma_minus: float
    lam_plus: float
    delta_omega: float
    eps0: float
    t_sep: float
    fit_gap: float = DEFAULT_FIT_GAP
    fit_start: float | None = None

    @property
    def lam(self) -> float:
        return self.members[0].lam

    @property
    def dim(self) -> int:
        return self.members[0].dim

    @property
    def n_members(self) -> int:
        return len(self.members)

    @property
    def all_gaussons(self) -> bool:
        return all(p.is_gausson for p in self.members)

    @property
    def rate(self) -> float:
        """Rate constant of the Gaussian-in-time decay: lam for Gaussons, sigma_- otherwise."""
        return self.lam if self.all_gaussons else self.sigma_minus

    @property
    def expected_c(self) -> float:
        return -self.rate * self.v_star**2 / 4.0

    @property
    def fit_window(self) -> tuple[float, float]:
        lo = self.t_obs if self.fit_start is None else max(self.t_obs, self.fit_start)
        return lo, max(self.t_n_list) - self.fit_gap

    def separated_after(self, distance: float) -> float:
        """Earliest t >= T_obs from which all centers stay `distance` apart up to max T_n."""
        t_hi = max(self.t_n_list)
        for t in np.linspace(self.t_obs, t_hi, _FIT_START_POINTS):
            if self.min_center_distance(float(t), t_hi)[0] >= distance:
                return float(t)
        return t_hi

    @classmethod
    def from_members(
        cls,
        members: Sequence[GaussianParams],
        t_n_list: Sequence[float],
        t_obs: float | None = None,
        fit_gap: float = DEFAULT_FIT_GAP,
    ) -> "MultiConfig":
        """Derive v_*, sigma_-, eps0 and T_sep; ``t_obs`` defaults to T_sep."""
        members = tuple(members)
        if not members:
            raise ConfigInvalid("at least one member is required")
        lam, dim = members[0].lam, members[0].dim
        if any(p.lam != lam for p in members):
            raise ConfigInvalid("members must share lambda")
        if any(p.dim != dim for p in members):
            raise ConfigInvalid("members must share the dimension")
        if lam <= 0:
            raise ConfigInvalid("the construction needs lambda > 0", lam=lam)
        t_n = tuple(float(t) for t in t_n_list)
        if not t_n or any(t <= 0 for t in t_n) or any(b <= a for a, b in zip(t_n, t_n[1:])):
            raise ConfigInvalid("T_n list must be increasing and positive", t_n=t_n)

        n = len(members)
        if n > 1:
            v = np.array([p.v for p in members])
            dv = np.linalg.norm(v[:, None, :] - v[None, :, :], axis=-1)
            v_star = float(dv[~np.eye(n, dtype=bool)].min())
            if v_star <= 0:
                raise ConfigInvalid("members need pairwise distinct velocities", v_star=v_star)
        else:
            v_star = float("inf")

        bounds = [member_bounds(p, max(t_n)) for p in members]
        sigma_minus = min(b.lam_minus for b in bounds)
        lam_plus = max(b.lam_plus for b in bounds)
        delta_omega = max(b.log_amp_max for b in bounds) - min(b.log_amp_min for b in bounds)
        e0 = eps0(sigma_minus, lam_plus, delta_omega, n, dim)

        if n > 1:
            x = np.array([p.x0 for p in members])
            dx = np.linalg.norm(x[:, None, :] - x[None, :, :], axis=-1)
            t_sep = float(np.max(1.0 / e0 + dx[~np.eye(n, dtype=bool)]) / v_star)
        else:
            t_sep = 0.0

        cfg = cls(
            members=members,
            t_n_list=t_n,
            t_obs=t_sep if t_obs is None else float(t_obs),
            v_star=v_star,
            sigma_minus=sigma_minus,
            lam_plus=lam_plus,
            delta_omega=delta_omega,
            eps0=e0,
            t_sep=t_sep,
            fit_gap=fit_gap,
        )
        if n > 1 and not cfg.all_gaussons:
            need = FIT_SEPARATION_WIDTHS / np.sqrt(2.0 * sigma_minus)
            cfg = replace(cfg, fit_start=cfg.separated_after(need))
        return cfg

    def min_center_distance(self, t_lo: float, t_hi: float) -> tuple[float, float]:
        """Smallest pairwise center distance over [t_lo, t_hi] and the time it occurs."""
        best, when = float("inf"), t_lo
        for j in range(self.n_members):
            for k in range(j + 1, self.n_members):
                pj, pk = self.members[j], self.members[k]
                dx, dv = pj.x0 - pk.x0, pj.v - pk.v
                vv = float(dv @ dv)
                t = t_lo if vv == 0 else float(np.clip(-(dx @ dv) / vv, t_lo, t_hi))
                dist = float(np.linalg.norm(dx + t * dv))
                if dist < best:
                    best, when = dist, t
        return best, when

    def grid_for(self, max_spacing: float = 0.08) -> Grid:
        """Box covering every center over [T_obs, max T_n] plus the width margin."""
        radius = self.box_margin
        for p in self.members:
            for t in (self.t_obs, max(self.t_n_list)):
                radius = max(radius, float(np.max(np.abs(p.center(t)))) + self.box_margin)
        return Grid.covering(self.dim, radius, max_spacing)

    @property
    def box_margin(self) -> float:
        return BOX_MARGIN / np.sqrt(2.0 * self.sigma_minus)

    def centers(self, t: float) -> RealArray:
        return np.array([p.center(t) for p in self.members])
