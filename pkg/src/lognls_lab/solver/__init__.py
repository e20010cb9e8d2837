"""Pseudospectral split-step solver and grid norms."""

from .config import SolverConfig
from .field_io import read_field, write_field
from .grid import Field, Grid, sample, same_grid, time_reversed
from .norms import (
    NormReport,
    distances,
    fh1_distance,
    gradient,
    h1_distance,
    l2_distance,
    norms,
)
from .splitting import SplitStepSolver, Trajectory, integrate, step
from .stability import EnvelopeReport, stability_envelope_check

__all__ = [
    "EnvelopeReport",
    "Field",
    "Grid",
    "NormReport",
    "SolverConfig",
    "SplitStepSolver",
    "Trajectory",
    "distances",
    "fh1_distance",
    "gradient",
    "h1_distance",
    "integrate",
    "l2_distance",
    "norms",
    "read_field",
    "same_grid",
    "sample",
    "stability_envelope_check",
    "step",
    "time_reversed",
    "write_field",
]
