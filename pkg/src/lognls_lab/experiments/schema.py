"""
Experiment configs: one pydantic model per command, loaded from TOML.

Every model forbids unknown keys. Parse errors and validation errors both
surface as ``ConfigInvalid`` with the line/column or field path in the message.
"""

from __future__ import annotations

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path
from typing import Any, TypeVar

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from ..dynamics import GaussianParams
from ..infra.errors import ConfigInvalid
from ..solver import Grid, SolverConfig
from ..types import Splitting

M = TypeVar("M", bound=BaseModel)

# [re, im] pairs, row-major
ComplexMatrix = list[list[tuple[float, float]]]


class _Model(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True, frozen=True)


class GridSpec(_Model):
    dim: int = Field(default=1, ge=1, le=3)
    extent: float = Field(gt=0)
    n: int = Field(ge=16)

    def build(self) -> Grid:
        return Grid(dim=self.dim, extent=self.extent, n=self.n)


class SolverSpec(_Model):
    """Solver settings without lambda, which every run config carries at top level."""

    dt: float = 1e-3
    eps: float = Field(default=1e-14, gt=0)
    splitting: Splitting = "strang"
    dealias: bool = False
    tail_tol: float = Field(default=1e-10, gt=0)
    monitor_every: int = Field(default=10, ge=1)

    def build(self, lam: float) -> SolverConfig:
        return SolverConfig(lam=lam, **self.model_dump())


def complex_matrix(rows: ComplexMatrix) -> np.ndarray:
    a = np.array([[complex(re, im) for re, im in row] for row in rows])
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ConfigInvalid("a_in must be a square matrix of [re, im] pairs")
    return a


class MemberSpec(_Model):
    """A Gausson by default; ``a_in`` or the 1D shorthand ``alpha`` make it a general Gaussian."""

    omega: float = 0.0
    x0: list[float] | float = 0.0
    v: list[float] | float = 0.0
    theta: float = 0.0
    a_in: ComplexMatrix | None = None
    alpha: tuple[float, float] | None = None

    @model_validator(mode="after")
    def _one_shape(self) -> "MemberSpec":
        if self.a_in is not None and self.alpha is not None:
            raise ValueError("give either a_in or alpha, not both")
        return self

    def to_params(self, lam: float, dim: int) -> GaussianParams:
        x0 = np.broadcast_to(np.asarray(self.x0, dtype=float), (dim,))
        v = np.broadcast_to(np.asarray(self.v, dtype=float), (dim,))
        if self.alpha is not None:
            if dim != 1:
                raise ConfigInvalid("alpha members are one-dimensional", dim=dim)
            return GaussianParams.breather(
                self.alpha[0], self.alpha[1], lam, self.omega, float(x0[0]), float(v[0]), self.theta
            )
        if self.a_in is None:
            return GaussianParams.gausson(lam, dim, self.omega, x0, v, self.theta)
        a = complex_matrix(self.a_in)
        if a.shape[0] != dim:
            raise ConfigInvalid("a_in size differs from dim", size=a.shape[0], dim=dim)
        return GaussianParams(a_in=a, omega=self.omega, x0=x0, v=v, theta=self.theta, lam=lam)


class GaussonRunConfig(_Model):
    lam: float = Field(alias="lambda", gt=0)
    member: MemberSpec = MemberSpec()
    grid: GridSpec
    solver: SolverSpec = SolverSpec()
    t_end: float = Field(default=1.0, ge=0)
    samples: int = Field(default=11, ge=2)


class BreatherRunConfig(_Model):
    lam: float = Field(alias="lambda")
    alpha: tuple[float, float] = (1.0, 0.0)
    t_end: float = Field(default=20.0, gt=0)
    samples: int = Field(default=401, ge=2)
    tol: float = Field(default=1e-10, gt=0)
    # lambda < 0: width ratio r / (2 t sqrt(|lam| ln t)) up to this time
    asymptotic_t_end: float | None = Field(default=None, ge=1e3)


class MatrixOdeRunConfig(_Model):
    lam: float = Field(alias="lambda")
    a_in: ComplexMatrix
    t_end: float = Field(default=20.0, gt=0)
    samples: int = Field(default=201, ge=3)
    tol: float = Field(default=1e-10, gt=0)


class MultiRunConfig(_Model):
    lam: float = Field(alias="lambda", gt=0)
    dim: int = Field(default=1, ge=1, le=3)
    members: list[MemberSpec] = Field(min_length=1)
    t_n: list[float] = Field(min_length=1)
    t_obs: float | None = None
    fit_gap: float = Field(default=1.0, ge=0)
    solver: SolverSpec = SolverSpec()
    # explicit box; by default one covering every center with the width margin
    grid: GridSpec | None = None
    max_spacing: float = Field(default=0.08, gt=0)

    def params(self) -> list[GaussianParams]:
        return [m.to_params(self.lam, self.dim) for m in self.members]


class LocalizedRunConfig(_Model):
    lam: float = Field(alias="lambda", gt=0)
    dim: int = Field(default=1, ge=1, le=3)
    members: list[MemberSpec] = Field(min_length=1)
    # final time of the backward run that supplies the trajectory
    t_n: float = Field(gt=0)
    t_offset: float = Field(default=0.0, ge=0)
    t_start: float = Field(default=0.0, ge=0)
    t_end: float = Field(gt=0)
    dt: float = Field(default=0.05, gt=0)
    # required for a single member; otherwise the minimal relative speed
    v_star: float | None = Field(default=None, ge=0)
    solver: SolverSpec = SolverSpec()
    grid: GridSpec | None = None
    max_spacing: float = Field(default=0.08, gt=0)
    tail_times: list[float] = Field(default_factory=list)

    @model_validator(mode="after")
    def _window(self) -> "LocalizedRunConfig":
        if self.t_end <= self.t_start:
            raise ValueError("t_end must exceed t_start")
        if self.t_offset + self.t_end > self.t_n:
            raise ValueError("t_offset + t_end must not exceed t_n")
        return self

    def params(self) -> list[GaussianParams]:
        return [m.to_params(self.lam, self.dim) for m in self.members]

    def times(self) -> np.ndarray:
        n = int(round((self.t_end - self.t_start) / self.dt))
        return self.t_start + self.dt * np.arange(n + 1)


def _pair(x0: float, v: float) -> list[MemberSpec]:
    return [MemberSpec(x0=-x0, v=v), MemberSpec(x0=x0, v=-v)]


class InequalityRunConfig(_Model):
    samples: int = Field(default=1_000_000, ge=1)
    checks: list[str] = Field(
        default_factory=lambda: ["log_pair", "f1_expansion", "zlogz_lipschitz"]
    )
    tails: bool = True
    lam: float = Field(default=1.0, alias="lambda", gt=0)
    separations: list[float] = Field(default_factory=lambda: [6.0, 8.0, 10.0, 12.0])
    # Gausson pair for the weighted ladder and the pointwise majorant
    members: list[MemberSpec] = Field(default_factory=lambda: _pair(0.0, 1.0))
    weighted_times: list[float] = Field(default_factory=lambda: [3.0, 4.0, 5.0, 6.0])
    majorant_time: float = 4.0
    majorant_samples: int = Field(default=10_000, ge=1)

    def params(self) -> list[GaussianParams]:
        return [m.to_params(self.lam, 1) for m in self.members]


class AcceptanceConfig(_Model):
    # criterion name -> tolerance; 0 makes the criterion fail
    tolerances: dict[str, float] = Field(default_factory=dict)
    inequality_samples: int = Field(default=1_000_000, ge=1)


def format_errors(err: ValidationError) -> str:
    parts = []
    for e in err.errors():
        where = ".".join(str(p) for p in e["loc"]) or "<root>"
        parts.append(f"{where}: {e['msg']}")
    return "; ".join(parts)


def parse_config(raw: dict[str, Any], model: type[M], source: str = "<config>") -> M:
    try:
        return model.model_validate(raw)
    except ValidationError as e:
        raise ConfigInvalid(format_errors(e), path=source) from e


def load_config(path: str | Path, model: type[M]) -> M:
    """Parse a TOML file and validate it against ``model``."""
    p = Path(path)
    try:
        raw = tomllib.loads(p.read_text(encoding="utf-8"))
    except FileNotFoundError as e:
        raise ConfigInvalid("config file not found", path=str(p)) from e
    except tomllib.TOMLDecodeError as e:
        # the decoder message carries "(at line L, column C)"
        raise ConfigInvalid(f"TOML syntax error: {e}", path=str(p)) from e
    return parse_config(raw, model, str(p))
