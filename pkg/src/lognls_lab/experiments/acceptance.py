"""
Desk-scale acceptance suite.

Each criterion measures a handful of numbers and compares its primary one
against a tolerance that ``AcceptanceConfig.tolerances`` may override. Every
comparison is strict, so a tolerance of 0 always fails. Criteria that need a
full construction call the command bodies and read their JSON back.

The Gausson pair starts at x0 = -8, +8 with v = +1, -1, so the members pass
through each other at t = 8 and T_sep is about 8.9. Final times at or below
the crossing leave no separated window to observe, hence the ladder
{10, 12, 14, 16} instead of one starting at 6. The breather pair crosses at
the same time with v = +1/2, -1/2: at the faster speed the Gaussian-in-time
decay reaches the solver floor within one or two breathing periods, too few
for a stable quadratic fit of ln ||w||.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Sequence

import numpy as np
import orjson

from ..dynamics import (
    GaussianParams,
    breather_asymptotic_check,
    detect_breather_period,
    eval_gaussian_solution,
    eval_gausson,
    evolve_matrix_ode,
)
from ..infra.errors import CheckFailed, ConfigInvalid
from ..infra.logging import get_logger
from ..infra.store import RunDir
from ..inequalities import (
    POINTWISE,
    log_bound_ladder,
    pointwise_majorant_check,
    sweep,
    tail_ladder_report,
    weighted_norm_ladder,
)
from ..multisoliton import rigidity_lower_bound_check
from ..solver import Grid, SolverConfig, integrate, l2_distance, norms, sample
from ..solver import stability_envelope_check
from .commands import RunContext, cmd_build_multisoliton, cmd_localized, cmd_multigaussian
from .schema import AcceptanceConfig, LocalizedRunConfig, MemberSpec, MultiRunConfig

log = get_logger("acceptance")

LADDER = [10.0, 12.0, 14.0, 16.0]
BREATHER_LADDER = [14.0, 16.0, 18.0, 20.0]
# secondary thresholds, not overridable
FIRST_INTEGRAL_DRIFT = 1e-8
MASS_DRIFT = 1e-12
ENERGY_ORDER = 1.9
R_SQUARED = 0.95


@dataclass
class Outcome:
    passed: bool
    measured: dict[str, Any]


@dataclass(frozen=True)
class Criterion:
    name: str
    tolerance: float
    run: Callable[[float, "Suite"], Outcome]


@dataclass
class Suite:
    cfg: AcceptanceConfig
    ctx: RunContext
    work_dir: Path


def _crossing_pair(
    alpha: tuple[float, float] | None = None, speed: float = 1.0
) -> list[MemberSpec]:
    x0 = 8.0 * speed
    return [
        MemberSpec(x0=-x0, v=speed, alpha=alpha),
        MemberSpec(x0=x0, v=-speed, alpha=alpha),
    ]


def _gausson_field(grid: Grid, omega: float = 0.0, x0: float = 0.0):
    return sample(lambda x: eval_gausson(omega, [x0], [0.0], 0.0, 1.0, 0.0, x), grid)


# -------- criteria --------


def gausson_fixed_point(tol: float, _s: Suite) -> Outcome:
    worst = 0.0
    times = np.linspace(0.0, 20.0, 201)
    for lam in (0.5, 1.0, 2.0):
        for d in (1, 2, 3):
            fixed = 2.0 * lam * np.eye(d)
            for s in evolve_matrix_ode(fixed, lam, times):
                worst = max(worst, float(np.max(np.abs(s.A - fixed))))
    return Outcome(worst < tol, {"max_deviation": worst})


def breather_period(tol: float, _s: Suite) -> Outcome:
    per = detect_breather_period(1.0, 0.0, 1.0)
    ret = max(per.r_error, per.rdot_error)
    ok = ret < tol and per.first_integral_drift < FIRST_INTEGRAL_DRIFT
    return Outcome(ok, {"period": per.period, "return_error": ret,
                        "first_integral_drift": per.first_integral_drift})


def breather_asymptotic(tol: float, _s: Suite) -> Outcome:
    rep = breather_asymptotic_check(1.0, 0.0, -1.0, t_end=1e6)
    return Outcome(abs(rep.final_ratio - 1.0) < tol, {"final_ratio": rep.final_ratio})


def _energy_drift(u0, cfg: SolverConfig, t_end: float) -> float:
    """Largest relative energy deviation over 20 equally spaced observer times."""
    e0 = norms(u0, cfg).energy
    traj = integrate(u0, 0.0, t_end, cfg, observers=np.linspace(0.0, t_end, 21))
    return max(abs(norms(f, cfg).energy - e0) for _, f in traj) / abs(e0)


def solver_exact_flow(tol: float, _s: Suite) -> Outcome:
    grid = Grid(dim=1, extent=40.0, n=512)
    p = GaussianParams(a_in=np.array([[1.0 + 0.0j]]), lam=1.0)
    s0, s2 = evolve_matrix_ode(p.a_in, 1.0, [0.0, 2.0])
    u0 = sample(lambda x: eval_gaussian_solution(p, s0, x), grid)
    exact = sample(lambda x: eval_gaussian_solution(p, s2, x), grid)
    cfg = SolverConfig(lam=1.0, dt=1e-3)
    u2 = integrate(u0, 0.0, 2.0, cfg).final
    rel = l2_distance(u2, exact) / norms(exact, cfg).l2
    m0, m2 = norms(u0, cfg).mass, norms(u2, cfg).mass
    mass_drift = abs(m2 - m0) / m0
    coarse = _energy_drift(u0, cfg.with_dt(0.02), 2.0)
    fine = _energy_drift(u0, cfg.with_dt(0.01), 2.0)
    order = float(np.log2(coarse / fine))
    ok = rel < tol and mass_drift < MASS_DRIFT and order >= ENERGY_ORDER
    return Outcome(ok, {"relative_l2_error": rel, "mass_drift": mass_drift,
                        "energy_order": order})


def l2_envelope(tol: float, _s: Suite) -> Outcome:
    grid = Grid(dim=1, extent=40.0, n=512)
    u0 = _gausson_field(grid)
    v0 = _gausson_field(grid, omega=0.05, x0=0.2)
    rep = stability_envelope_check(u0, v0, SolverConfig(lam=1.0, dt=1e-3), 2.0)
    return Outcome(rep.max_ratio < 1.0 + tol, {"max_ratio": rep.max_ratio})


def rigidity(tol: float, _s: Suite) -> Outcome:
    grid = Grid(dim=1, extent=40.0, n=512)
    u0 = _gausson_field(grid)
    v0 = _gausson_field(grid, omega=0.05, x0=0.2)
    rep = rigidity_lower_bound_check(u0, v0, SolverConfig(lam=1.0, dt=1e-3), 3.0)
    return Outcome(rep.min_ratio > 1.0 - tol, {"min_ratio": rep.min_ratio})


def _read_json(path: Path) -> dict[str, Any]:
    return orjson.loads(path.read_bytes())


def _sub_context(s: Suite) -> RunContext:
    return RunContext(out_dir=s.work_dir, seed=s.ctx.seed, jobs=s.ctx.jobs)


def multigausson_rate(tol: float, s: Suite) -> Outcome:
    cfg = MultiRunConfig(lam=1.0, members=_crossing_pair(), t_n=LADDER)
    fit = _read_json(cmd_build_multisoliton(cfg, _sub_context(s)) / "fit.json")
    sup = fit["super_exponential"]
    ok = (
        abs(fit["c_ratio"] - 1.0) < tol
        and fit["r_squared"] > R_SQUARED
        and sup["h1"]
        and sup["fh1"]
    )
    return Outcome(ok, {k: fit[k] for k in ("c", "expected_c", "r_squared", "super_exponential")})


def multigaussian_rate(tol: float, s: Suite) -> Outcome:
    pair = _crossing_pair((1.0, 0.0), speed=0.5)
    cfg = MultiRunConfig(lam=1.0, members=pair, t_n=BREATHER_LADDER)
    fit = _read_json(cmd_multigaussian(cfg, _sub_context(s)) / "fit.json")
    ok = abs(fit["c_ratio"] - 1.0) < tol
    return Outcome(ok, {k: fit[k] for k in ("c", "expected_c", "sigma_minus", "r_squared")})


def inequality_certification(tol: float, s: Suite) -> Outcome:
    """Violation fraction of every sweep and of the tail ladder must stay below tol."""
    n = s.cfg.inequality_samples
    reports = [sweep(name, n, s.ctx.seed, s.ctx.jobs) for name in POINTWISE]
    reports.append(tail_ladder_report(seed=s.ctx.seed))
    fractions = {r.name: r.violations / r.samples for r in reports}
    return Outcome(all(f < tol for f in fractions.values()), {"violation_fraction": fractions})


def log_bound_exponent(tol: float, _s: Suite) -> Outcome:
    ladder = log_bound_ladder((6.0, 8.0, 10.0, 12.0), lam=1.0, dim=1)
    fit = ladder.fit
    return Outcome(fit.relative_error < tol, {"slope": fit.slope, "expected": fit.expected_slope})


def slow_variation(tol: float, s: Suite) -> Outcome:
    cfg = LocalizedRunConfig(
        lam=1.0, members=_crossing_pair(), t_n=16.0, t_offset=11.5, t_end=2.0, dt=0.05
    )
    rep = _read_json(cmd_localized(cfg, _sub_context(s)) / "slow_variation.json")
    c = rep["envelope_constant"]
    fit = rep["fit"]
    ok = (
        c is not None
        and np.isfinite(c)
        and fit is not None
        and fit["c"] < 0
        and rep["energy_drift"] < tol
    )
    return Outcome(ok, {"envelope_constant": c, "fit_c": None if fit is None else fit["c"],
                        "energy_drift": rep["energy_drift"]})


def weighted_norm(tol: float, s: Suite) -> Outcome:
    members = [m.to_params(1.0, 1) for m in (MemberSpec(v=1.0), MemberSpec(v=-1.0))]
    fit = weighted_norm_ladder(members, (3.0, 4.0, 5.0, 6.0), v_star=2.0)
    rep = pointwise_majorant_check(members, 4.0, 10_000, s.ctx.seed)
    ok = fit.relative_error < tol and rep.passed
    return Outcome(ok, {"slope": fit.slope, "expected": fit.expected_slope,
                        "majorant_violations": rep.violations})


CRITERIA: list[Criterion] = [
    Criterion("gausson_fixed_point", 1e-12, gausson_fixed_point),
    Criterion("breather_period", 1e-6, breather_period),
    Criterion("breather_asymptotic", 0.15, breather_asymptotic),
    Criterion("solver_exact_flow", 1e-4, solver_exact_flow),
    Criterion("l2_envelope", 0.05, l2_envelope),
    Criterion("multigausson_rate", 0.5, multigausson_rate),
    Criterion("multigaussian_rate", 0.5, multigaussian_rate),
    Criterion("rigidity", 0.1, rigidity),
    Criterion("inequality_certification", 1e-9, inequality_certification),
    Criterion("log_bound_exponent", 0.15, log_bound_exponent),
    Criterion("slow_variation", 1e-3, slow_variation),
    Criterion("weighted_norm", 0.5, weighted_norm),
]
CRITERIA_BY_NAME = {c.name: c for c in CRITERIA}


def select(only: Sequence[str] | None) -> list[Criterion]:
    if not only:
        return list(CRITERIA)
    unknown = [n for n in only if n not in CRITERIA_BY_NAME]
    if unknown:
        raise ConfigInvalid("unknown acceptance criteria", names=unknown)
    return [CRITERIA_BY_NAME[n] for n in only]


def cmd_acceptance(
    cfg: AcceptanceConfig, ctx: RunContext, only: Sequence[str] | None = None
) -> Path:
    """Run the selected criteria, write summary.json, raise CheckFailed naming any failures."""
    unknown = [k for k in cfg.tolerances if k not in CRITERIA_BY_NAME]
    if unknown:
        raise ConfigInvalid("tolerances for unknown criteria", names=unknown)
    chosen = select(only)
    run = RunDir(ctx.out_dir, "acceptance", cfg, ctx.seed)
    suite = Suite(cfg, ctx, run.root / "runs")
    rows = []
    for crit in chosen:
        tol = cfg.tolerances.get(crit.name, crit.tolerance)
        start = time.perf_counter()
        outcome = crit.run(tol, suite)
        elapsed = time.perf_counter() - start
        level = log.info if outcome.passed else log.error
        level("%s: %s in %.1fs", crit.name, "pass" if outcome.passed else "FAIL", elapsed)
        rows.append({
            "name": crit.name,
            "passed": bool(outcome.passed),
            "measured": outcome.measured,
            "tolerance": tol,
            "runtime_s": elapsed,
        })
    failed = [r["name"] for r in rows if not r["passed"]]
    run.json("summary.json", {"passed": not failed, "criteria": rows})
    run.finish("failed" if failed else "ok")
    if failed:
        raise CheckFailed("acceptance criteria failed", criteria=failed)
    return run.root
