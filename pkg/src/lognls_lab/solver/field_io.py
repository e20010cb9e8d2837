"""
Binary field records.

Layout (little-endian): u32 dim, u32 n, f64 L, then n^d complex values as
(re, im) f64 pairs in row-major order. Metadata (lambda, eps, t, ...) goes
to a JSON sidecar next to the record.
"""

from __future__ import annotations

from pathlib import Path
from typing import Any

import numpy as np
import orjson

from ..infra.errors import ConfigInvalid
from ..infra.store import write_json
from .grid import Field, Grid

_HEADER = np.dtype([("dim", "<u4"), ("n", "<u4"), ("extent", "<f8")])


def sidecar_path(path: Path) -> Path:
    return path.with_suffix(".json")


def write_field(path: str | Path, field: Field, meta: dict[str, Any] | None = None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    g = field.grid
    header = np.array([(g.dim, g.n, g.extent)], dtype=_HEADER)
    with open(path, "wb") as fh:
        fh.write(header.tobytes())
        fh.write(np.ascontiguousarray(field.flat, dtype="<c16").tobytes())
    write_json(sidecar_path(path), {"dim": g.dim, "n": g.n, "extent": g.extent, **(meta or {})})
    return path


def read_field(path: str | Path) -> tuple[Field, dict[str, Any]]:
    path = Path(path)
    raw = path.read_bytes()
    if len(raw) < _HEADER.itemsize:
        raise ConfigInvalid("field record truncated", path=str(path))
    header = np.frombuffer(raw[: _HEADER.itemsize], dtype=_HEADER)[0]
    grid = Grid(dim=int(header["dim"]), extent=float(header["extent"]), n=int(header["n"]))
    values = np.frombuffer(raw[_HEADER.itemsize:], dtype="<c16")
    if values.size != grid.n**grid.dim:
        raise ConfigInvalid("field record size does not match its header", path=str(path))
    side = sidecar_path(path)
    meta = orjson.loads(side.read_bytes()) if side.exists() else {}
    return Field(grid, values.astype(complex).reshape(grid.shape)), meta
