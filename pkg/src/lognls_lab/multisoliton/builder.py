"""
Backward construction of approximate multi-solitons.

For a final time T_n the solver starts from the exact superposition
u_n(T_n) = B(T_n) = sum_k B_k(T_n) and integrates backward; the error
w_n = u_n - B is recorded at the sample times. The run with the largest
T_n is fitted for the Gaussian-in-time decay, and an N = 1 control run of
each member measures the discretization floor below which errors carry no
information.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import partial
from typing import Sequence

import numpy as np

from ..dynamics import GaussianParams, GaussianState, eval_gaussian_solution, evolve_matrix_ode
from ..infra.errors import BoxTooSmall, InsufficientData, SeparationViolated
from ..infra.logging import get_logger
from ..infra.pool import map_jobs
from ..solver import Field, Grid, SolverConfig, distances, integrate, sample
from ..types import RealArray
from .config import MultiConfig
from .fit import DecayFit, fit_gaussian_decay

log = get_logger("multisoliton")

DEFAULT_SAMPLE_DT = 0.25
ERROR_NORMS = ("l2", "h1", "fh1")
# pairwise center distance may undershoot 1/eps0 by this much at the window edge
SEPARATION_SLACK = 1e-9


def member_states(p: GaussianParams, times: Sequence[float]) -> dict[float, GaussianState]:
    """Exact states of one member at nonnegative ``times``."""
    ts = sorted({float(t) for t in times})
    if p.is_gausson:
        a = np.asarray(p.a_in)
        eig = float(2.0 * p.lam)
        return {t: GaussianState(t, a, 0.0, 1.0, (eig, eig)) for t in ts}
    grid_t = ts if ts and ts[0] == 0.0 else [0.0, *ts]
    states = evolve_matrix_ode(p.a_in, p.lam, grid_t)
    return {s.t: s for s in states}


def exact_sum(
    members: Sequence[GaussianParams],
    states: Sequence[dict[float, GaussianState]],
    t: float,
    grid: Grid,
) -> Field:
    """B(t) = sum_k B_k(t) sampled on the grid."""
    pts = grid.points

    def fn(_x):
        return sum(eval_gaussian_solution(p, s[t], pts) for p, s in zip(members, states))

    return sample(fn, grid)


def make_final_data(cfg: MultiConfig, t_n: float, grid: Grid) -> Field:
    if t_n not in cfg.t_n_list:
        raise ValueError(f"T_n={t_n} is not on the configured ladder {cfg.t_n_list}")
    for p in cfg.members:
        if not grid.contains(p.center(t_n), cfg.box_margin):
            raise BoxTooSmall(
                "member center too close to the box edge",
                t=t_n,
                center=p.center(t_n).tolist(),
                margin=cfg.box_margin,
            )
    states = [member_states(p, [t_n]) for p in cfg.members]
    return exact_sum(cfg.members, states, t_n, grid)


def default_sample_times(cfg: MultiConfig, t_n: float, dt: float = DEFAULT_SAMPLE_DT) -> RealArray:
    lo = cfg.t_obs
    times = np.arange(lo, t_n, dt)
    return np.append(times[times < t_n - 1e-12], t_n)


@dataclass(eq=False)
class BuildRun:
    """Error records of one backward run, in increasing time order."""

    t_n: float
    times: RealArray
    errors: dict[str, RealArray]
    fields: list[Field] = field(default_factory=list)

    def table(self) -> tuple[list[str], RealArray]:
        cols = ["t", *ERROR_NORMS]
        return cols, np.column_stack([self.times, *[self.errors[k] for k in ERROR_NORMS]])

    def error_at(self, t: float, norm: str = "l2") -> float:
        k = int(np.argmin(np.abs(self.times - t)))
        if abs(self.times[k] - t) > 1e-9:
            raise KeyError(f"t={t} was not sampled")
        return float(self.errors[norm][k])


def build_approximate_multisoliton(
    cfg: MultiConfig,
    t_n: float,
    solver: SolverConfig,
    grid: Grid | None = None,
    sample_times: Sequence[float] | None = None,
    keep_fields: bool = False,
) -> BuildRun:
    """Integrate backward from B(T_n) and measure w_n = u_n - B at the sample times."""
    grid = grid or cfg.grid_for()
    times = np.asarray(
        default_sample_times(cfg, t_n) if sample_times is None else sample_times, dtype=float
    )
    if times.size == 0 or times.min() < cfg.t_obs - 1e-12 or times.max() > t_n + 1e-12:
        raise ValueError(f"sample times must lie in [{cfg.t_obs}, {t_n}]")
    if cfg.n_members > 1:
        dist, when = cfg.min_center_distance(float(times.min()), t_n)
        if dist < (1.0 - SEPARATION_SLACK) / cfg.eps0:
            raise SeparationViolated(
                "member centers come within 1/eps0 during the window",
                t=when,
                distance=dist,
                required=1.0 / cfg.eps0,
            )

    final = make_final_data(cfg, t_n, grid)
    states = [member_states(p, [*times, t_n]) for p in cfg.members]
    traj = integrate(final, t_n, float(times.min()), solver, observers=list(times))

    ordered = np.sort(np.unique(times))
    rows: dict[str, list[float]] = {k: [] for k in ERROR_NORMS}
    kept: list[Field] = []
    for t in ordered:
        u = traj.at(float(t))
        exact = exact_sum(cfg.members, states, float(t), grid)
        for k, v in distances(u, exact).items():
            rows[k].append(v)
        if keep_fields:
            kept.append(u)
    run = BuildRun(t_n, ordered, {k: np.asarray(v) for k, v in rows.items()}, kept)
    log.info(
        "T_n=%g: %d samples, l2 error at t=%g is %.3e",
        t_n, ordered.size, ordered[0], run.errors["l2"][0],
    )
    return run


def _build_one(cfg: MultiConfig, solver: SolverConfig, grid: Grid, t_n: float) -> BuildRun:
    return build_approximate_multisoliton(cfg, t_n, solver, grid)


def build_ladder(
    cfg: MultiConfig, solver: SolverConfig, grid: Grid | None = None, jobs: int = 1
) -> list[BuildRun]:
    """One backward run per T_n; runs are independent and may go to a process pool."""
    grid = grid or cfg.grid_for()
    return map_jobs(partial(_build_one, cfg, solver, grid), cfg.t_n_list, jobs)


def _control_one(cfg: MultiConfig, solver: SolverConfig, grid: Grid, p: GaussianParams) -> float:
    single = MultiConfig.from_members([p], cfg.t_n_list, t_obs=cfg.t_obs, fit_gap=cfg.fit_gap)
    run = build_approximate_multisoliton(single, max(cfg.t_n_list), solver, grid)
    return float(run.errors["l2"].max())


def control_floor(
    cfg: MultiConfig, solver: SolverConfig, grid: Grid | None = None, jobs: int = 1
) -> float:
    """Largest L2 error of the single-member runs: the solver's error floor."""
    grid = grid or cfg.grid_for()
    floors = map_jobs(partial(_control_one, cfg, solver, grid), cfg.members, jobs)
    floor = max(floors)
    log.info("control floor %.3e over %d member runs", floor, len(floors))
    return floor


@dataclass(frozen=True)
class LadderConsistency:
    """Errors of successive T_n at their common sample times."""

    times: RealArray
    pairs: list[tuple[float, float]]
    cauchy_ok: bool
    monotone_ok: bool
    worst_cauchy_ratio: float
    worst_monotone_ratio: float


def ladder_consistency(
    runs: Sequence[BuildRun], floor: float = 0.0, gap: float = 0.0
) -> LadderConsistency:
    """Successive runs agree within twice the smaller error and do not grow with n (2x slack).

    Only times at least ``gap`` before the smaller T_n are compared; samples where
    both errors sit below ``floor`` are skipped.
    """
    ordered = sorted(runs, key=lambda r: r.t_n)
    worst_c, worst_m = 0.0, 0.0
    pairs = []
    common_all: set[float] = set()
    for a, b in zip(ordered, ordered[1:]):
        common = np.intersect1d(np.round(a.times, 9), np.round(b.times, 9))
        for t in common[common <= a.t_n - gap + 1e-9]:
            ea, eb = a.error_at(float(t)), b.error_at(float(t))
            if max(ea, eb) <= floor:
                continue
            small = max(min(ea, eb), floor)
            # |u_a - u_b| <= e_a + e_b, compared with twice the smaller error
            worst_c = max(worst_c, abs(ea - eb) / (2.0 * small))
            worst_m = max(worst_m, eb / (2.0 * max(ea, floor)))
            common_all.add(float(t))
        pairs.append((a.t_n, b.t_n))
    return LadderConsistency(
        times=np.array(sorted(common_all)),
        pairs=pairs,
        cauchy_ok=worst_c <= 1.0,
        monotone_ok=worst_m <= 1.0,
        worst_cauchy_ratio=worst_c,
        worst_monotone_ratio=worst_m,
    )


@dataclass(eq=False)
class MultiBuildResult:
    cfg: MultiConfig
    runs: list[BuildRun]
    floor: float
    fit: DecayFit
    fits_by_norm: dict[str, DecayFit]
    consistency: LadderConsistency


def _fit_norm(run: BuildRun, cfg: MultiConfig, floor: float, norm: str) -> DecayFit:
    lo, hi = cfg.fit_window
    sel = (run.times >= lo - 1e-12) & (run.times <= hi + 1e-12)
    return fit_gaussian_decay(run.times[sel], run.errors[norm][sel], floor=floor)


def multisoliton_build(
    cfg: MultiConfig, solver: SolverConfig, grid: Grid | None = None, jobs: int = 1
) -> MultiBuildResult:
    """Full ladder, floor and fit. The L2 fit is the one compared with -rate v_*^2 / 4."""
    grid = grid or cfg.grid_for()
    runs = build_ladder(cfg, solver, grid, jobs)
    floor = control_floor(cfg, solver, grid, jobs)
    last = max(runs, key=lambda r: r.t_n)
    fits: dict[str, DecayFit] = {}
    for norm in ERROR_NORMS:
        try:
            fits[norm] = _fit_norm(last, cfg, floor, norm)
        except InsufficientData:
            if norm == "l2":
                raise
            log.warning("not enough %s samples above the floor for a fit", norm)
    fit = fits["l2"]
    level = log.info if 0.5 <= fit.c / cfg.expected_c <= 1.5 else log.warning
    level("decay fit c=%.4f (expected %.4f), r2=%.4f", fit.c, cfg.expected_c, fit.r_squared)
    consistency = ladder_consistency(runs, floor, cfg.fit_gap)
    return MultiBuildResult(cfg, runs, floor, fit, fits, consistency)


def multigaussian_build(
    cfg: MultiConfig, solver: SolverConfig, grid: Grid | None = None, jobs: int = 1
) -> MultiBuildResult:
    """Same construction for general Gaussian members; only the L2 rate sigma_- is asserted."""
    if cfg.all_gaussons:
        log.info("all members are Gaussons; sigma_- = lambda = %g", cfg.sigma_minus)
    return multisoliton_build(cfg, solver, grid, jobs)
