"""Two distinct solutions cannot approach each other faster than e^{-2 lam t}."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..infra.errors import DomainViolation
from ..infra.logging import get_logger
from ..solver import Field, SolverConfig
from ..solver.stability import pair_distances
from ..types import RealArray

log = get_logger("multisoliton")


@dataclass(frozen=True, eq=False)
class RigidityReport:
    times: RealArray
    distances: RealArray
    ratios: RealArray

    @property
    def min_ratio(self) -> float:
        return float(self.ratios.min())


def rigidity_lower_bound_check(
    u0: Field, v0: Field, cfg: SolverConfig, t_end: float, samples: int = 31
) -> RigidityReport:
    """||u - v||(t) / (||u0 - v0|| e^{-2 lam t}) on [0, t_end]; at least 1 up to discretization."""
    if cfg.lam <= 0:
        raise DomainViolation("the rigidity bound needs lambda > 0", lam=cfg.lam)
    t, dist = pair_distances(u0, v0, cfg, t_end, samples)
    d0 = dist[0]
    if d0 == 0.0:
        raise DomainViolation("u0 and v0 coincide")
    ratios = dist / (d0 * np.exp(-2.0 * cfg.lam * np.abs(t)))
    report = RigidityReport(t, dist, ratios)
    log.info("rigidity: min ratio %.4f over [0, %g]", report.min_ratio, t_end)
    return report
