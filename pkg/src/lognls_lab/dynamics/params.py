"""
Parameter and state types of the exact Gaussian flow.

A general Gaussian solution is fixed by (A_in, omega, x0, v, theta) and the
nonlinearity lam; the Gausson is the member with A_in = 2*lam*I.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..infra.errors import ConfigInvalid
from ..types import ComplexArray, RealArray

SYMMETRY_TOL = 1e-13


@dataclass(frozen=True, eq=False)
class GaussianParams:
    """One Gaussian member: A_in, log-amplitude shift, center, velocity, phase."""

    a_in: ComplexArray
    omega: float = 0.0
    x0: RealArray = field(default_factory=lambda: np.zeros(1))
    v: RealArray = field(default_factory=lambda: np.zeros(1))
    theta: float = 0.0
    lam: float = 1.0

    def __post_init__(self) -> None:
        a = np.atleast_2d(np.asarray(self.a_in, dtype=complex))
        d = a.shape[0]
        if a.shape != (d, d) or not 1 <= d <= 3:
            raise ConfigInvalid("a_in must be a square matrix of size 1..3", shape=a.shape)
        x0 = np.broadcast_to(np.asarray(self.x0, dtype=float), (d,)).copy()
        v = np.broadcast_to(np.asarray(self.v, dtype=float), (d,)).copy()
        object.__setattr__(self, "a_in", a)
        object.__setattr__(self, "x0", x0)
        object.__setattr__(self, "v", v)

        if np.max(np.abs(a - a.T)) > SYMMETRY_TOL * max(1.0, float(np.max(np.abs(a)))):
            raise ConfigInvalid("a_in must be symmetric (not Hermitian)")
        if np.linalg.eigvalsh(a.real)[0] <= 0:
            raise ConfigInvalid("Re a_in must be positive definite")
        if self.lam == 0:
            raise ConfigInvalid("lambda must be nonzero")

    @property
    def dim(self) -> int:
        return self.a_in.shape[0]

    @property
    def is_gausson(self) -> bool:
        return bool(np.array_equal(self.a_in, 2.0 * self.lam * np.eye(self.dim)))

    @classmethod
    def gausson(
        cls,
        lam: float,
        dim: int = 1,
        omega: float = 0.0,
        x0=None,
        v=None,
        theta: float = 0.0,
    ) -> "GaussianParams":
        return cls(
            a_in=2.0 * lam * np.eye(dim, dtype=complex),
            omega=omega,
            x0=np.zeros(dim) if x0 is None else x0,
            v=np.zeros(dim) if v is None else v,
            theta=theta,
            lam=lam,
        )

    @classmethod
    def breather(
        cls,
        alpha_r: float,
        alpha_i: float,
        lam: float,
        omega: float = 0.0,
        x0: float = 0.0,
        v: float = 0.0,
        theta: float = 0.0,
    ) -> "GaussianParams":
        """1D member whose width follows the breather ODE from (alpha_r, alpha_i)."""
        return cls(
            a_in=np.array([[breather_a_in(alpha_r, alpha_i)]]),
            omega=omega,
            x0=np.array([x0]),
            v=np.array([v]),
            theta=theta,
            lam=lam,
        )

    def center(self, t: float) -> RealArray:
        return self.x0 + t * self.v


def breather_a_in(alpha_r: float, alpha_i: float) -> complex:
    """A(0) = 1/r^2 - i r'/r evaluated at r = alpha_r, r' = alpha_i."""
    if alpha_r <= 0:
        raise ConfigInvalid("alpha_r must be positive", alpha_r=alpha_r)
    return complex(1.0 / alpha_r**2, -alpha_i / alpha_r)


def breather_alpha(a_in: complex) -> tuple[float, float]:
    """Inverse of :func:`breather_a_in`."""
    alpha_r = 1.0 / np.sqrt(a_in.real)
    return float(alpha_r), float(-a_in.imag * alpha_r)


@dataclass(frozen=True, eq=False)
class GaussianState:
    t: float
    A: ComplexArray
    phi: float
    det_ratio: float
    spectrum_bounds: tuple[float, float]


@dataclass(frozen=True)
class BreatherState:
    t: float
    r: float
    rdot: float
    phi: float
    first_integral: float

    @property
    def A(self) -> complex:
        return complex(1.0 / self.r**2, -self.rdot / self.r)
