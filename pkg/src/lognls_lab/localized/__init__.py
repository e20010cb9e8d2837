"""Localized conservation laws around a well-separated multi-soliton."""

from .partition import (
    Partition,
    PartitionDerivativeReport,
    build_partition,
    partition_derivative_check,
    smoothstep,
    smoothstep_prime,
)
from .quantities import (
    ActionDefectReport,
    LocalizedReport,
    SlowVariationReport,
    action_defect_report,
    gausson_fields,
    localized_quantities,
    slow_variation_report,
    total_energy,
)
from .tails import (
    OuterNorm,
    OverlapReport,
    TailReport,
    gausson_orthogonality_report,
    gausson_outer_norm,
    gausson_tail_report,
    ladder_decreasing,
    orthogonality_ladder,
    tail_ladder,
)

__all__ = [
    "ActionDefectReport",
    "LocalizedReport",
    "OuterNorm",
    "OverlapReport",
    "Partition",
    "PartitionDerivativeReport",
    "SlowVariationReport",
    "TailReport",
    "action_defect_report",
    "build_partition",
    "gausson_fields",
    "gausson_orthogonality_report",
    "gausson_outer_norm",
    "gausson_tail_report",
    "ladder_decreasing",
    "localized_quantities",
    "orthogonality_ladder",
    "partition_derivative_check",
    "slow_variation_report",
    "smoothstep",
    "smoothstep_prime",
    "tail_ladder",
    "total_energy",
]
