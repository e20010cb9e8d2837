"""
Seeded randomized sweeps of the pointwise inequalities.

A sweep is cut into fixed-size chunks; chunk i draws from
``SeedSequence(seed, spawn_key=(i,))``, so the merged report does not depend
on how chunks are spread over workers.
"""

from __future__ import annotations

from functools import partial
from typing import Callable

import numpy as np
from pydantic import BaseModel

from ..infra.logging import get_logger
from ..infra.pool import map_jobs
from .pointwise import f1_expansion_terms, log_pair_terms, zlogz_lipschitz_terms
from .sampling import sample_disk_pairs, sample_plane_pairs

log = get_logger("inequalities")

CHUNK = 100_000
# margins below -RTOL * scale are violations; above that they are evaluation ties
RTOL = 1e-13


class CheckReport(BaseModel):
    name: str
    samples: int
    violations: int
    worst_margin: float
    worst_relative: float
    seed: int

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def merge(self, other: "CheckReport") -> "CheckReport":
        return CheckReport(
            name=self.name,
            samples=self.samples + other.samples,
            violations=self.violations + other.violations,
            worst_margin=min(self.worst_margin, other.worst_margin),
            worst_relative=min(self.worst_relative, other.worst_relative),
            seed=self.seed,
        )

    @classmethod
    def empty(cls, name: str, seed: int) -> "CheckReport":
        return cls(name=name, samples=0, violations=0, worst_margin=np.inf,
                   worst_relative=np.inf, seed=seed)


_Terms = Callable[[np.ndarray, np.ndarray], tuple[np.ndarray, np.ndarray]]
_Sampler = Callable[[np.random.Generator, int], tuple[np.ndarray, np.ndarray]]

POINTWISE: dict[str, tuple[_Terms, _Sampler]] = {
    "log_pair": (log_pair_terms, sample_plane_pairs),
    "f1_expansion": (f1_expansion_terms, sample_plane_pairs),
    "zlogz_lipschitz": (zlogz_lipschitz_terms, sample_disk_pairs),
}


def summarize(name: str, margin: np.ndarray, scale: np.ndarray, seed: int) -> CheckReport:
    margin = np.atleast_1d(margin)
    scale = np.atleast_1d(scale)
    with np.errstate(divide="ignore", invalid="ignore"):
        rel = np.where(scale > 0, margin / scale, 0.0)
    return CheckReport(
        name=name,
        samples=int(margin.size),
        violations=int(np.count_nonzero(margin < -RTOL * scale)),
        worst_margin=float(margin.min()),
        worst_relative=float(rel.min()),
        seed=seed,
    )


def _run_chunk(name: str, seed: int, total: int, index: int) -> CheckReport:
    terms, sampler = POINTWISE[name]
    size = min(CHUNK, total - index * CHUNK)
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))
    a, b = sampler(rng, size)
    margin, scale = terms(a, b)
    return summarize(name, margin, scale, seed)


def sweep(name: str, samples: int, seed: int, jobs: int = 1) -> CheckReport:
    if name not in POINTWISE:
        raise KeyError(f"unknown pointwise check: {name}")
    if samples < 1:
        raise ValueError("samples must be >= 1")
    chunks = (samples + CHUNK - 1) // CHUNK
    parts = map_jobs(partial(_run_chunk, name, seed, samples), range(chunks), jobs)
    report = CheckReport.empty(name, seed)
    for part in parts:
        report = report.merge(part)
    level = log.info if report.passed else log.error
    level("%s: %d samples, %d violations, worst margin %.3e",
          name, report.samples, report.violations, report.worst_margin)
    return report
