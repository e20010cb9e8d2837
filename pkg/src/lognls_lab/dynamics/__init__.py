"""Exact Gaussian dynamics: matrix ODE, breathers and closed-form solutions."""

from .breather import (
    AsymptoticReport,
    BreatherPeriod,
    breather_asymptotic_check,
    breather_trajectory_table,
    detect_breather_period,
    evolve_breather,
    first_integral,
)
from .closed_form import eval_gaussian_solution, eval_gausson, gausson_mass, gausson_profile
from .matrix_ode import (
    SpectrumScan,
    evolve_matrix_ode,
    matrix_trajectory_table,
    phase_integral,
    scan_trajectory,
    tensor_product_check,
)
from .params import BreatherState, GaussianParams, GaussianState, breather_a_in, breather_alpha

__all__ = [
    "AsymptoticReport",
    "BreatherPeriod",
    "BreatherState",
    "GaussianParams",
    "GaussianState",
    "SpectrumScan",
    "breather_a_in",
    "breather_alpha",
    "breather_asymptotic_check",
    "breather_trajectory_table",
    "detect_breather_period",
    "eval_gaussian_solution",
    "eval_gausson",
    "evolve_breather",
    "evolve_matrix_ode",
    "first_integral",
    "gausson_mass",
    "gausson_profile",
    "matrix_trajectory_table",
    "phase_integral",
    "scan_trajectory",
    "tensor_product_check",
]
