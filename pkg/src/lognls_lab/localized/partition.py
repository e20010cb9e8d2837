"""
Moving partition of unity around the members.

    psi_j(x) = phi(|x - c_j| - v_* t / 2 - 2),   c_j = x_j + (t_offset + t) v_j
    psi_0    = 1 - sum_{j >= 1} psi_j

phi is the quintic smoothstep S(u) = 6u^5 - 15u^4 + 10u^3 with u = (1 - s)/2:
phi = 1 for s <= -1, phi = 0 for s >= 1, phi(0) = 1/2 and -15/16 <= phi' <= 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..dynamics import GaussianParams
from ..infra.errors import SupportsOverlap
from ..infra.logging import get_logger
from ..solver import Grid
from ..types import RealArray

log = get_logger("localized")

# psi_j = 1 inside radius v_* t / 2 + INNER, 0 outside v_* t / 2 + OUTER
INNER = 1.0
OUTER = 3.0
SLOPE_BOUND = 15.0 / 16.0
# ratios are only formed where |grad psi| exceeds this
GRADIENT_FLOOR = 1e-4


def smoothstep(s) -> RealArray:
    u = np.clip(0.5 * (1.0 - np.asarray(s, dtype=float)), 0.0, 1.0)
    return u**3 * (10.0 + u * (-15.0 + 6.0 * u))


def smoothstep_prime(s) -> RealArray:
    """phi'(s) = -15 u^2 (1 - u)^2."""
    u = np.clip(0.5 * (1.0 - np.asarray(s, dtype=float)), 0.0, 1.0)
    return -15.0 * u * u * (1.0 - u) ** 2


@dataclass(frozen=True, eq=False)
class Partition:
    t: float
    t_offset: float
    v_star: float
    grid: Grid
    centers: RealArray
    velocities: RealArray
    # shape (N + 1, *grid.shape); index 0 is the residual
    psi: RealArray
    # signed shell coordinate |x - c_j| - v_* t / 2 - 2, shape (N, *grid.shape)
    shell: RealArray

    @property
    def n_members(self) -> int:
        return self.centers.shape[0]

    @property
    def radius_inner(self) -> float:
        return 0.5 * self.v_star * self.t + INNER

    @property
    def radius_outer(self) -> float:
        return 0.5 * self.v_star * self.t + OUTER

    @property
    def time(self) -> float:
        """Absolute time at which the centers are placed."""
        return self.t_offset + self.t

    def gradient_magnitude(self) -> RealArray:
        """|grad psi_j| = |phi'| on the shell coordinate, j >= 1."""
        return np.abs(smoothstep_prime(self.shell))


def _fd_gradient(values: RealArray, spacing: float) -> RealArray:
    parts = np.gradient(values, spacing)
    if values.ndim == 1:
        return np.abs(parts)
    return np.sqrt(sum(g * g for g in parts))


def _distance(points: RealArray, center: RealArray) -> RealArray:
    y = points - center
    return np.sqrt(np.sum(y * y, axis=-1))


def build_partition(
    members: Sequence[GaussianParams],
    t: float,
    v_star: float,
    grid: Grid,
    t_offset: float = 0.0,
) -> Partition:
    tau = t_offset + t
    centers = np.array([p.center(tau) for p in members])
    velocities = np.array([p.v for p in members])
    n = len(members)
    for j in range(n):
        for k in range(j + 1, n):
            dist = float(np.linalg.norm(centers[j] - centers[k]))
            if dist <= v_star * t + 2.0 * OUTER:
                raise SupportsOverlap(
                    "member supports overlap; t is below the separated regime",
                    t=t,
                    pair=(j, k),
                    distance=dist,
                    required=v_star * t + 2.0 * OUTER,
                )
    pts = grid.points
    shell = np.stack([_distance(pts, c) - 0.5 * v_star * t - 2.0 for c in centers])
    psi_members = smoothstep(shell)
    psi = np.concatenate([(1.0 - psi_members.sum(axis=0))[None], psi_members])
    return Partition(
        t=float(t),
        t_offset=float(t_offset),
        v_star=float(v_star),
        grid=grid,
        centers=centers,
        velocities=velocities,
        psi=psi,
        shell=shell,
    )


@dataclass(frozen=True)
class PartitionDerivativeReport:
    c0: float
    worst_ratio: float
    max_gradient: float
    max_fd_gradient: float

    @property
    def passed(self) -> bool:
        return self.worst_ratio <= self.c0 * (1.0 + 1e-3) and self.max_gradient <= 1.0


def partition_derivative_check(
    members: Sequence[GaussianParams],
    partition: Partition,
    h: float = 1e-5,
) -> PartitionDerivativeReport:
    """|d_t psi_j| <= C0 |grad psi_j| pointwise with C0 = max_j (|v_j| + v_* / 2).

    d_t psi_j comes from central differences of rebuilt partitions; the
    finite-difference gradient is reported against the bound 1.
    """
    p = partition
    fwd = build_partition(members, p.t + h, p.v_star, p.grid, p.t_offset)
    bwd = build_partition(members, p.t - h, p.v_star, p.grid, p.t_offset)
    dpsi_dt = (fwd.psi[1:] - bwd.psi[1:]) / (2.0 * h)
    grad = p.gradient_magnitude()
    c0 = float(np.max(np.linalg.norm(p.velocities, axis=-1)) + 0.5 * p.v_star)

    active = grad > GRADIENT_FLOOR
    ratio = np.where(active, np.abs(dpsi_dt) / np.where(active, grad, 1.0), 0.0)
    fd = np.stack([_fd_gradient(psi, p.grid.spacing) for psi in p.psi[1:]])
    report = PartitionDerivativeReport(
        c0=c0,
        worst_ratio=float(ratio.max()),
        max_gradient=float(grad.max()),
        max_fd_gradient=float(fd.max()),
    )
    log.debug("partition derivative: worst %.4f vs C0 %.4f", report.worst_ratio, c0)
    return report
