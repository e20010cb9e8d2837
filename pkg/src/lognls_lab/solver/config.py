from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field, field_validator

from ..types import Splitting


class SolverConfig(BaseModel):
    """Coefficients and tolerances of the split-step solver.

    ``dt`` carries the direction of time; ``integrate`` flips its sign when
    the requested interval runs the other way.
    """

    model_config = ConfigDict(frozen=True, populate_by_name=True, extra="forbid")

    lam: float = Field(alias="lambda")
    dt: float = 1e-3
    eps: float = Field(default=1e-14, gt=0)
    splitting: Splitting = "strang"
    dealias: bool = False
    tail_tol: float = Field(default=1e-10, gt=0)
    # boundary/aliasing monitors run every this many steps and at observer times
    monitor_every: int = Field(default=10, ge=1)

    @field_validator("dt")
    @classmethod
    def _nonzero_dt(cls, v: float) -> float:
        if v == 0:
            raise ValueError("dt must be nonzero")
        return v

    def with_dt(self, dt: float) -> "SolverConfig":
        return self.model_copy(update={"dt": dt})
