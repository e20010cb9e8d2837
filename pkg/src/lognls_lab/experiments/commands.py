"""
Command bodies. Each ``cmd_*`` takes a validated config plus the run context,
writes its artifacts into a fresh run directory and returns that directory.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..config import settings
from ..dynamics import (
    breather_asymptotic_check,
    breather_trajectory_table,
    detect_breather_period,
    eval_gausson,
    evolve_breather,
    evolve_matrix_ode,
    gausson_mass,
    matrix_trajectory_table,
    phase_integral,
    tensor_product_check,
)
from ..infra.errors import BoxTooSmall, CheckFailed, ConfigInvalid
from ..infra.logging import get_logger
from ..infra.store import RunDir
from ..inequalities import (
    CheckReport,
    log_bound_ladder,
    pointwise_majorant_check,
    sweep,
    tail_ladder_report,
    weighted_norm_ladder,
)
from ..localized import (
    action_defect_report,
    build_partition,
    localized_quantities,
    orthogonality_ladder,
    partition_derivative_check,
    slow_variation_report,
    tail_ladder,
    total_energy,
)
from ..multisoliton import (
    MultiBuildResult,
    MultiConfig,
    build_approximate_multisoliton,
    control_floor,
    multigaussian_build,
    multisoliton_build,
)
from ..solver import NormReport, integrate, l2_distance, norms, sample, write_field
from .schema import (
    BreatherRunConfig,
    GaussonRunConfig,
    InequalityRunConfig,
    LocalizedRunConfig,
    MatrixOdeRunConfig,
    MultiRunConfig,
    complex_matrix,
)

log = get_logger("experiments")

# half-widths of margin a Gausson needs inside the box, in units of (2 lam)^(-1/2)
GAUSSON_MARGIN = 12.0


@dataclass(frozen=True)
class RunContext:
    out_dir: Path = Path(settings.OUT_DIR)
    seed: int = settings.SEED
    jobs: int = settings.JOBS


# -------- exact Gaussian dynamics --------


def cmd_gausson(cfg: GaussonRunConfig, ctx: RunContext) -> Path:
    """Split-step run of one Gausson against its closed form."""
    grid = cfg.grid.build()
    p = cfg.member.to_params(cfg.lam, grid.dim)
    if not p.is_gausson:
        raise ConfigInvalid("the gausson command takes a Gausson member (no a_in or alpha)")
    margin = GAUSSON_MARGIN / np.sqrt(2.0 * cfg.lam)
    for t in (0.0, cfg.t_end):
        if not grid.contains(p.center(t), margin):
            raise BoxTooSmall("Gausson leaves the box", t=t, margin=margin)

    solver = cfg.solver.build(cfg.lam)
    run = RunDir(ctx.out_dir, "gausson", cfg, ctx.seed)

    def exact(t: float):
        return sample(lambda x: eval_gausson(p.omega, p.x0, p.v, p.theta, p.lam, t, x), grid)

    times = np.linspace(0.0, cfg.t_end, cfg.samples)
    traj = integrate(exact(0.0), 0.0, cfg.t_end, solver, observers=list(times))
    mass = gausson_mass(cfg.lam, grid.dim, p.omega)
    rows, reports = [], []
    for t, u in traj:
        rep = norms(u, solver)
        err = l2_distance(u, exact(t))
        reports.append(rep)
        rows.append([t, *rep.as_row(), rep.linf_floor, err, err / np.sqrt(mass)])
    cols = ["t", *NormReport.columns(grid.dim), "linf_floor", "error_l2", "error_rel"]
    run.csv("gausson.csv", cols, np.array(rows))

    write_field(run.path("final_field.bin"), traj.final, {"t": cfg.t_end})
    run.path("final_field.json")
    run.json("summary.json", {
        "exact_mass": mass,
        "mass_drift": abs(reports[-1].mass - reports[0].mass) / reports[0].mass,
        "energy_drift": abs(reports[-1].energy - reports[0].energy) / abs(reports[0].energy),
        "max_error_rel": max(r[-1] for r in rows),
        "linf_above_floor": all(r.linf >= r.linf_floor * (1 - 1e-10) for r in reports),
    })
    run.finish()
    return run.root


def cmd_breather(cfg: BreatherRunConfig, ctx: RunContext) -> Path:
    run = RunDir(ctx.out_dir, "breather", cfg, ctx.seed)
    ar, ai = cfg.alpha
    times = np.linspace(0.0, cfg.t_end, cfg.samples)
    states = evolve_breather(ar, ai, cfg.lam, cfg.t_end, cfg.tol, times=times)
    cols, rows = breather_trajectory_table(states)
    run.csv("breather.csv", cols, rows)
    h = rows[:, -1]
    summary: dict[str, object] = {
        "first_integral_drift": float(np.max(np.abs(h - h[0]))),
        "r_min": float(rows[:, 1].min()),
        "r_max": float(rows[:, 1].max()),
    }
    if cfg.lam > 0:
        per = detect_breather_period(ar, ai, cfg.lam, cfg.tol)
        summary["period"] = {
            "period": per.period,
            "r_error": per.r_error,
            "rdot_error": per.rdot_error,
            "first_integral_drift": per.first_integral_drift,
        }
    elif cfg.asymptotic_t_end is not None:
        rep = breather_asymptotic_check(ar, ai, cfg.lam, cfg.asymptotic_t_end, cfg.tol)
        run.csv("asymptotic.csv", ["t", "ratio"], np.column_stack([rep.times, rep.ratios]))
        summary["asymptotic"] = {"final_ratio": rep.final_ratio, "monotone_tail": rep.monotone_tail}
    run.json("summary.json", summary)
    run.finish()
    return run.root


def cmd_matrix_ode(cfg: MatrixOdeRunConfig, ctx: RunContext) -> Path:
    a_in = complex_matrix(cfg.a_in)
    d = a_in.shape[0]
    run = RunDir(ctx.out_dir, "matrix-ode", cfg, ctx.seed)
    times = np.linspace(0.0, cfg.t_end, cfg.samples)
    states = evolve_matrix_ode(a_in, cfg.lam, times, cfg.tol)
    cols, rows = matrix_trajectory_table(states)
    run.csv("matrix_ode.csv", cols, rows)

    phi = phase_integral(states, cfg.lam)
    fixed = 2.0 * cfg.lam * np.eye(d)
    summary: dict[str, object] = {
        "phase_quadrature_gap": float(np.max(np.abs(phi - [s.phi for s in states]))),
        "distance_to_gausson": float(max(np.max(np.abs(s.A - fixed)) for s in states)),
        "spectrum_bounds": list(states[-1].spectrum_bounds),
    }
    if d > 1 and np.count_nonzero(a_in - np.diag(np.diag(a_in))) == 0:
        summary["tensor_product_deviation"] = tensor_product_check(
            np.diag(a_in), cfg.lam, times, cfg.tol
        )
    run.json("summary.json", summary)
    run.finish()
    return run.root


# -------- multi-soliton construction --------


def _multi_setup(cfg: MultiRunConfig):
    mcfg = MultiConfig.from_members(cfg.params(), cfg.t_n, cfg.t_obs, cfg.fit_gap)
    grid = cfg.grid.build() if cfg.grid is not None else mcfg.grid_for(cfg.max_spacing)
    return mcfg, grid, cfg.solver.build(cfg.lam)


def _super_exponential(result: MultiBuildResult, norm: str) -> bool:
    """Decreasing over the fit window with a negative quadratic log coefficient."""
    fit = result.fits_by_norm.get(norm)
    if fit is None:
        return False
    last = max(result.runs, key=lambda r: r.t_n)
    lo, hi = fit.window
    sel = (last.times >= lo - 1e-12) & (last.times <= hi + 1e-12)
    e = last.errors[norm][sel]
    e = e[e > 10.0 * result.floor]
    return bool(fit.c < 0 and np.all(np.diff(e) <= 0))


def _write_build(run: RunDir, result: MultiBuildResult) -> dict[str, object]:
    mcfg = result.cfg
    for r in result.runs:
        cols, rows = r.table()
        run.csv(f"errors_T{r.t_n:g}.csv", cols, rows)
    c = result.consistency
    payload: dict[str, object] = {
        "c": result.fit.c,
        "expected_c": mcfg.expected_c,
        "c_ratio": result.fit.c / mcfg.expected_c,
        "r_squared": result.fit.r_squared,
        "fits": {k: f.as_dict() for k, f in result.fits_by_norm.items()},
        "super_exponential": {k: _super_exponential(result, k) for k in ("h1", "fh1")},
        "floor": result.floor,
        "v_star": mcfg.v_star,
        "sigma_minus": mcfg.sigma_minus,
        "rate": mcfg.rate,
        "eps0": mcfg.eps0,
        "t_sep": mcfg.t_sep,
        "t_obs": mcfg.t_obs,
        "fit_window": list(mcfg.fit_window),
        "consistency": {
            "pairs": c.pairs,
            "cauchy_ok": c.cauchy_ok,
            "monotone_ok": c.monotone_ok,
            "worst_cauchy_ratio": c.worst_cauchy_ratio,
            "worst_monotone_ratio": c.worst_monotone_ratio,
        },
    }
    run.json("fit.json", payload)
    return payload


def _cmd_multi(cfg: MultiRunConfig, ctx: RunContext, command: str, general: bool) -> Path:
    mcfg, grid, solver = _multi_setup(cfg)
    run = RunDir(ctx.out_dir, command, cfg, ctx.seed)
    if mcfg.n_members == 1:
        floor = control_floor(mcfg, solver, grid, ctx.jobs)
        run.json("floor.json", {"floor": floor, "t_n": list(mcfg.t_n_list), "grid_n": grid.n})
        run.finish()
        return run.root
    build = multigaussian_build if general else multisoliton_build
    _write_build(run, build(mcfg, solver, grid, ctx.jobs))
    run.finish()
    return run.root


def cmd_build_multisoliton(cfg: MultiRunConfig, ctx: RunContext) -> Path:
    return _cmd_multi(cfg, ctx, "build-multisoliton", general=False)


def cmd_multigaussian(cfg: MultiRunConfig, ctx: RunContext) -> Path:
    return _cmd_multi(cfg, ctx, "multigaussian", general=True)


# -------- localized analysis --------


def cmd_localized(cfg: LocalizedRunConfig, ctx: RunContext) -> Path:
    """Localized quantities along a backward-built trajectory and their slow variation."""
    members = cfg.params()
    times = cfg.times()
    absolute = cfg.t_offset + times
    mcfg = MultiConfig.from_members(members, [cfg.t_n], t_obs=float(absolute[0]))
    if mcfg.n_members == 1:
        v_star = cfg.v_star if cfg.v_star is not None else 0.0
    else:
        v_star = cfg.v_star if cfg.v_star is not None else mcfg.v_star
    grid = cfg.grid.build() if cfg.grid is not None else mcfg.grid_for(cfg.max_spacing)
    solver = cfg.solver.build(cfg.lam)

    # partitions first: an overlapping window fails before any integration
    partitions = [build_partition(members, t, v_star, grid, cfg.t_offset) for t in times]
    run = RunDir(ctx.out_dir, "localized", cfg, ctx.seed)
    traj = build_approximate_multisoliton(
        mcfg, cfg.t_n, solver, grid, sample_times=absolute, keep_fields=True
    )

    reports, energies, worst_dpsi = [], [], 0.0
    derivative_ok = True
    for part, u in zip(partitions, traj.fields):
        reports.append(localized_quantities(u, part, members, solver))
        energies.append(total_energy(u, solver))
        dp = partition_derivative_check(members, part)
        worst_dpsi = max(worst_dpsi, dp.worst_ratio / dp.c0 if dp.c0 > 0 else 0.0)
        derivative_ok = derivative_ok and dp.passed

    cols = reports[0].columns(len(members), grid.dim) + ["E_total"]
    rows = np.array([[*r.row(), e] for r, e in zip(reports, energies)])
    rows[:, 0] = times
    run.csv("localized.csv", cols, rows)

    slow = slow_variation_report(absolute, reports, mcfg.rate, v_star, cfg.t_offset, energies)
    scols, srows = slow.table()
    srows = srows.copy()
    srows[:, 0] = times
    run.csv("slow_variation.csv", scols, srows)
    run.json("slow_variation.json", {
        "envelope_constant": slow.envelope_constant,
        "noise_floor": slow.noise_floor,
        "energy_drift": slow.energy_drift,
        "fit": slow.fit.as_dict() if slow.fit is not None else None,
        "max_abs_derivative": float(np.max(np.abs(slow.derivative))),
        "rate": mcfg.rate,
        "v_star": v_star,
        "partition_derivative_ok": derivative_ok,
        "partition_worst_ratio_over_c0": worst_dpsi,
    })

    if all(p.is_gausson for p in members):
        defects = [action_defect_report(members, part, solver) for part in partitions]
        dcols = ["t", *[f"defect_{j}" for j in range(len(members) + 1)],
                 *[f"normalized_{j}" for j in range(len(members) + 1)]]
        drows = np.array([[d.t, *d.defects, *d.normalized] for d in defects])
        run.csv("action_defect.csv", dcols, drows)
        if cfg.tail_times:
            tcols, trows = tail_ladder(members[0], cfg.tail_times, v_star)
            run.csv("tails.csv", tcols, trows)
            if len(members) > 1:
                ocols, orows, _ = orthogonality_ladder(
                    members[0], members[1], cfg.tail_times, v_star, cfg.t_offset
                )
                run.csv("orthogonality.csv", ocols, orows)
    run.finish()
    return run.root


# -------- inequality certification --------


def _report_json(run: RunDir, report: CheckReport) -> None:
    run.json(f"{report.name}.json", report.model_dump())


def cmd_verify_inequalities(
    cfg: InequalityRunConfig, ctx: RunContext, samples: int | None = None
) -> Path:
    """One JSON per check; CheckFailed after every artifact is written if any check fails."""
    n = samples if samples is not None else cfg.samples
    if n < 1:
        raise ConfigInvalid("samples must be >= 1", samples=n)
    # the manifest and run_id describe what was actually drawn
    cfg = cfg.model_copy(update={"samples": n})
    run = RunDir(ctx.out_dir, "verify-inequalities", cfg, ctx.seed)
    failed: list[str] = []
    for name in cfg.checks:
        rep = sweep(name, n, ctx.seed, ctx.jobs)
        _report_json(run, rep)
        if not rep.passed:
            failed.append(name)
    if cfg.tails:
        rep = tail_ladder_report(seed=ctx.seed)
        _report_json(run, rep)
        if not rep.passed:
            failed.append(rep.name)

    ladder = log_bound_ladder(cfg.separations, cfg.lam)
    lcols, lrows = ladder.fit.table()
    run.csv("log_bound_ladder.csv", lcols, lrows)
    run.json("log_bound.json", {
        "slope": ladder.fit.slope,
        "expected_slope": ladder.fit.expected_slope,
        "relative_error": ladder.fit.relative_error,
        "implied_constants": ladder.implied_constants,
    })

    members = cfg.params()
    v = np.array([float(p.v[0]) for p in members])
    v_star = float(np.min(np.abs(v[:, None] - v[None, :])[~np.eye(len(v), dtype=bool)]))
    wfit = weighted_norm_ladder(members, cfg.weighted_times, v_star)
    wcols, wrows = wfit.table()
    run.csv("weighted_norm_ladder.csv", wcols, wrows)
    run.json("weighted_norm.json", {
        "slope": wfit.slope,
        "expected_slope": wfit.expected_slope,
        "relative_error": wfit.relative_error,
    })
    rep = pointwise_majorant_check(members, cfg.majorant_time, cfg.majorant_samples, ctx.seed)
    _report_json(run, rep)
    if not rep.passed:
        failed.append(rep.name)

    run.finish("failed" if failed else "ok")
    if failed:
        raise CheckFailed("inequality checks reported violations", checks=failed)
    return run.root
