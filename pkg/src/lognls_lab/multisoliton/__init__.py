"""Approximate multi-solitons by backward integration from superposed final data."""

from .builder import (
    BuildRun,
    LadderConsistency,
    MultiBuildResult,
    build_approximate_multisoliton,
    build_ladder,
    control_floor,
    default_sample_times,
    exact_sum,
    ladder_consistency,
    make_final_data,
    member_states,
    multigaussian_build,
    multisoliton_build,
)
from .config import MultiConfig, member_bounds
from .fit import DecayFit, fit_gaussian_decay
from .rigidity import RigidityReport, rigidity_lower_bound_check

__all__ = [
    "BuildRun",
    "DecayFit",
    "LadderConsistency",
    "MultiBuildResult",
    "MultiConfig",
    "RigidityReport",
    "build_approximate_multisoliton",
    "build_ladder",
    "control_floor",
    "default_sample_times",
    "exact_sum",
    "fit_gaussian_decay",
    "ladder_consistency",
    "make_final_data",
    "member_bounds",
    "member_states",
    "multigaussian_build",
    "multisoliton_build",
    "rigidity_lower_bound_check",
]
