from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence

from .config import settings
from .experiments import (
    AcceptanceConfig,
    BreatherRunConfig,
    GaussonRunConfig,
    InequalityRunConfig,
    LocalizedRunConfig,
    MatrixOdeRunConfig,
    MultiRunConfig,
    RunContext,
    cmd_acceptance,
    cmd_breather,
    cmd_build_multisoliton,
    cmd_gausson,
    cmd_localized,
    cmd_matrix_ode,
    cmd_multigaussian,
    cmd_verify_inequalities,
    load_config,
)
from .infra.errors import LabError
from .infra.logging import logger

# subcommand -> (config model, body, config required)
COMMANDS = {
    "gausson": (GaussonRunConfig, cmd_gausson, True),
    "breather": (BreatherRunConfig, cmd_breather, True),
    "matrix-ode": (MatrixOdeRunConfig, cmd_matrix_ode, True),
    "build-multisoliton": (MultiRunConfig, cmd_build_multisoliton, True),
    "multigaussian": (MultiRunConfig, cmd_multigaussian, True),
    "localized": (LocalizedRunConfig, cmd_localized, True),
    "verify-inequalities": (InequalityRunConfig, cmd_verify_inequalities, False),
    "acceptance": (AcceptanceConfig, cmd_acceptance, False),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lognls-lab", description="Numerical lab for the logarithmic Schrodinger equation"
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_model, _body, required) in COMMANDS.items():
        p = sub.add_parser(name)
        p.add_argument("--config", type=Path, required=required, help="TOML config file")
        p.add_argument("--seed", type=int, default=settings.SEED)
        p.add_argument("--jobs", type=int, default=settings.JOBS)
        p.add_argument("--out-dir", type=Path, default=Path(settings.OUT_DIR))
        if name == "verify-inequalities":
            p.add_argument("--samples", type=int, default=None, help="overrides the config")
        if name == "acceptance":
            p.add_argument("--only", action="append", default=None, metavar="CRITERION")
    return parser


def run(argv: Sequence[str] | None = None) -> Path:
    args = build_parser().parse_args(argv)
    model, body, _ = COMMANDS[args.command]
    cfg = load_config(args.config, model) if args.config else model()
    ctx = RunContext(out_dir=args.out_dir, seed=args.seed, jobs=max(1, args.jobs))
    logger.info("%s: seed=%d jobs=%d out=%s", args.command, ctx.seed, ctx.jobs, ctx.out_dir)
    if args.command == "verify-inequalities":
        return cmd_verify_inequalities(cfg, ctx, samples=args.samples)
    if args.command == "acceptance":
        return cmd_acceptance(cfg, ctx, only=args.only)
    return body(cfg, ctx)


def main(argv: Sequence[str] | None = None) -> None:
    try:
        root = run(argv)
    except LabError as e:
        logger.error("%s failed: %s", type(e).__name__, e)
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        sys.exit(e.exit_code)
    print(root)


if __name__ == "__main__":
    main()
