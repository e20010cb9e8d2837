"""
Run persistence: JSON/CSV writers and per-run directories with manifests.

A run directory is ``<out_dir>/<command>/<run_id>/``; ``run_id`` is a content
hash of the validated config so identical configs land in the same place.
Every file written through a :class:`RunDir` is recorded and listed in the
manifest, which is written last.
"""

from __future__ import annotations

import hashlib
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Sequence

import numpy as np
import orjson
from pydantic import BaseModel, Field

from .. import __version__
from .logging import get_logger

log = get_logger("store")

_JSON_OPTS = orjson.OPT_INDENT_2 | orjson.OPT_SORT_KEYS | orjson.OPT_SERIALIZE_NUMPY


def _default(obj: Any) -> Any:
    if isinstance(obj, BaseModel):
        return obj.model_dump(mode="json", by_alias=True)
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, Path):
        return str(obj)
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def dumps(payload: Any) -> bytes:
    """Deterministic JSON bytes: sorted keys, 2-space indent, trailing newline."""
    return orjson.dumps(payload, default=_default, option=_JSON_OPTS) + b"\n"


def config_hash(config: BaseModel, seed: int | None = None) -> str:
    """First 16 hex digits of SHA-256 over the sorted config dump, plus the seed when given."""
    payload: Any = config.model_dump(mode="json", by_alias=True)
    if seed is not None:
        payload = {"config": payload, "seed": seed}
    raw = orjson.dumps(payload, option=orjson.OPT_SORT_KEYS)
    return hashlib.sha256(raw).hexdigest()[:16]


def write_json(path: Path, payload: Any) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(dumps(payload))
    return path


def write_csv(path: Path, columns: Sequence[str], rows: np.ndarray) -> Path:
    """Header row plus full-precision (17 significant digits) values."""
    path.parent.mkdir(parents=True, exist_ok=True)
    data = np.atleast_2d(np.asarray(rows, dtype=float))
    if data.size == 0:
        data = np.empty((0, len(columns)))
    np.savetxt(path, data, delimiter=",", header=",".join(columns), comments="", fmt="%.17g")
    return path


def read_csv(path: Path) -> tuple[list[str], np.ndarray]:
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return header, data


class RunManifest(BaseModel):
    run_id: str
    command: str
    config: dict[str, Any]
    started: datetime
    finished: datetime | None = None
    outputs: list[str] = Field(default_factory=list)
    versions: str = __version__
    seed: int | None = None
    status: str = "running"


class RunDir:
    """Collects the artifacts of one command run."""

    def __init__(self, out_dir: str | Path, command: str, config: BaseModel, seed: int | None):
        self.run_id = config_hash(config, seed)
        self.root = Path(out_dir) / command / self.run_id
        self.root.mkdir(parents=True, exist_ok=True)
        self.manifest = RunManifest(
            run_id=self.run_id,
            command=command,
            config=config.model_dump(mode="json", by_alias=True),
            started=datetime.now(timezone.utc),
            seed=seed,
        )
        log.info("run %s/%s -> %s", command, self.run_id, self.root)

    def _record(self, path: Path) -> Path:
        rel = str(path.relative_to(self.root))
        if rel not in self.manifest.outputs:
            self.manifest.outputs.append(rel)
        return path

    def json(self, name: str, payload: Any) -> Path:
        return self._record(write_json(self.root / name, payload))

    def csv(self, name: str, columns: Sequence[str], rows: np.ndarray) -> Path:
        return self._record(write_csv(self.root / name, columns, rows))

    def path(self, name: str) -> Path:
        """Reserve a path for a writer that is not JSON/CSV (binary fields)."""
        return self._record(self.root / name)

    def finish(self, status: str = "ok") -> Path:
        self.manifest.finished = datetime.now(timezone.utc)
        self.manifest.status = status
        missing = [p for p in self.manifest.outputs if not (self.root / p).exists()]
        if missing:
            log.warning("manifest lists missing outputs: %s", missing)
        path = write_json(self.root / "manifest.json", self.manifest)
        log.info("run %s finished (%s, %d outputs)",
                 self.run_id, status, len(self.manifest.outputs))
        return path
