"""Config schema, command bodies and the acceptance suite behind the CLI."""

from .acceptance import CRITERIA, cmd_acceptance
from .commands import (
    RunContext,
    cmd_breather,
    cmd_build_multisoliton,
    cmd_gausson,
    cmd_localized,
    cmd_matrix_ode,
    cmd_multigaussian,
    cmd_verify_inequalities,
)
from .schema import (
    AcceptanceConfig,
    BreatherRunConfig,
    GaussonRunConfig,
    GridSpec,
    InequalityRunConfig,
    LocalizedRunConfig,
    MatrixOdeRunConfig,
    MemberSpec,
    MultiRunConfig,
    SolverSpec,
    load_config,
    parse_config,
)

__all__ = [
    "CRITERIA",
    "AcceptanceConfig",
    "BreatherRunConfig",
    "GaussonRunConfig",
    "GridSpec",
    "InequalityRunConfig",
    "LocalizedRunConfig",
    "MatrixOdeRunConfig",
    "MemberSpec",
    "MultiRunConfig",
    "RunContext",
    "SolverSpec",
    "cmd_acceptance",
    "cmd_breather",
    "cmd_build_multisoliton",
    "cmd_gausson",
    "cmd_localized",
    "cmd_matrix_ode",
    "cmd_multigaussian",
    "cmd_verify_inequalities",
    "load_config",
    "parse_config",
]
