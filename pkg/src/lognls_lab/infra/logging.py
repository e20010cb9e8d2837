from __future__ import annotations

import logging
import os
import sys
from logging.handlers import RotatingFileHandler
from pathlib import Path

from ..config import settings


def setup_logging(
    name: str = "lognls-lab",
    log_dir: str = settings.LOG_DIR,
    level: str = settings.LOG_LEVEL,
) -> logging.Logger:
    logger = logging.getLogger(name)
    logger.setLevel(level)

    if logger.handlers:
        return logger

    fmt = logging.Formatter(
        "%(asctime)s | %(levelname)s | %(name)s | %(message)s", "%Y-%m-%d %H:%M:%S"
    )

    # stderr: stdout carries command results
    sh = logging.StreamHandler(sys.stderr)
    sh.setFormatter(fmt)
    sh.setLevel(level)
    logger.addHandler(sh)

    if log_dir:
        Path(log_dir).mkdir(parents=True, exist_ok=True)
        fh = RotatingFileHandler(
            os.path.join(log_dir, f"{name}.log"), maxBytes=5_000_000, backupCount=2
        )
        fh.setFormatter(fmt)
        fh.setLevel(level)
        logger.addHandler(fh)
    return logger


def get_logger(area: str) -> logging.Logger:
    """Child logger sharing the lab handlers, e.g. ``get_logger("solver")``."""
    return logging.getLogger(f"lognls-lab.{area}")


logger = setup_logging()
