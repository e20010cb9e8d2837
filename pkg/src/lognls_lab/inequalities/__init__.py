"""Numerical certification of the pointwise and integral inequalities."""

from .gaussian_tails import (
    TailBound,
    gauss_tail_1d,
    gauss_tail_moments,
    gauss_tail_moments_radial,
    moment_constant,
    sphere_area,
    tail_ladder_report,
)
from .pointwise import (
    check_F1_expansion,
    check_log_pair,
    check_zlogz_lipschitz,
    f1,
    zlogz,
)
from .quadrature import integrate_box, tensor_quad, verified_quad
from .sum_gaussians import (
    GaussianTerm,
    LadderFit,
    LogBoundLadder,
    LogBoundReport,
    SeparationBounds,
    eps0,
    log_bound_ladder,
    log_defect,
    min_separation,
    pointwise_majorant_check,
    separation_bounds,
    sum_gaussian_log_bound,
    weighted_log_diff_norm,
    weighted_norm_ladder,
)
from .sweep import POINTWISE, CheckReport, sweep

__all__ = [
    "POINTWISE",
    "CheckReport",
    "GaussianTerm",
    "LadderFit",
    "LogBoundLadder",
    "LogBoundReport",
    "SeparationBounds",
    "TailBound",
    "check_F1_expansion",
    "check_log_pair",
    "check_zlogz_lipschitz",
    "eps0",
    "f1",
    "gauss_tail_1d",
    "gauss_tail_moments",
    "gauss_tail_moments_radial",
    "integrate_box",
    "log_bound_ladder",
    "log_defect",
    "min_separation",
    "moment_constant",
    "pointwise_majorant_check",
    "separation_bounds",
    "sphere_area",
    "sum_gaussian_log_bound",
    "sweep",
    "tail_ladder_report",
    "tensor_quad",
    "verified_quad",
    "weighted_log_diff_norm",
    "weighted_norm_ladder",
    "zlogz",
]
