from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..infra.errors import DomainViolation
from ..types import RealArray
from .config import SolverConfig
from .grid import Field
from .norms import l2_distance
from .splitting import integrate


@dataclass(frozen=True, eq=False)
class EnvelopeReport:
    times: RealArray
    distances: RealArray
    ratios: RealArray

    @property
    def max_ratio(self) -> float:
        return float(self.ratios.max())

    @property
    def min_ratio(self) -> float:
        return float(self.ratios.min())


def pair_distances(u0: Field, v0: Field, cfg: SolverConfig, t_end: float, samples: int):
    """Observed times and ||u - v|| of the two solutions on `samples` points of [0, t_end]."""
    times = np.linspace(0.0, t_end, samples)
    tu = integrate(u0, 0.0, t_end, cfg, observers=times)
    tv = integrate(v0, 0.0, t_end, cfg, observers=times)
    dist = np.array([l2_distance(a, b) for a, b in zip(tu.fields, tv.fields)])
    return np.asarray(tu.times), dist


def stability_envelope_check(
    u0: Field, v0: Field, cfg: SolverConfig, t_end: float, samples: int = 21
) -> EnvelopeReport:
    """||u - v||(t) / (||u0 - v0|| e^{2 lam |t|}); at most 1 up to discretization."""
    if cfg.lam <= 0:
        raise DomainViolation("the L2 envelope needs lambda > 0", lam=cfg.lam)
    times, dist = pair_distances(u0, v0, cfg, t_end, samples)
    d0 = dist[0]
    if d0 == 0.0:
        return EnvelopeReport(times, dist, np.zeros_like(dist))
    return EnvelopeReport(times, dist, dist / (d0 * np.exp(2.0 * cfg.lam * np.abs(times))))
