"""Closed-form evaluation of Gaussons and general Gaussian solutions."""

from __future__ import annotations

import numpy as np

from ..types import ComplexArray, RealArray
from .params import GaussianParams, GaussianState


def _galilean_phase(theta, omega, v, lam, t, x) -> ComplexArray:
    # boost by v: u(t, x - vt) e^{i(v.x - |v|^2 t / 2)}
    return theta + 2.0 * lam * omega * t + x @ v - 0.5 * float(v @ v) * t


def eval_gaussian_solution(p: GaussianParams, s: GaussianState, x) -> ComplexArray:
    """B(t, x) for points ``x`` of shape (..., d); a single d-vector gives a scalar."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    d = p.dim
    if x.shape[-1] != d:
        x = x[..., None] if d == 1 else x
    y = x - p.center(s.t)
    quad = np.einsum("...i,ij,...j->...", y, s.A, y)
    exponent = (
        1j * _galilean_phase(p.theta, p.omega, p.v, p.lam, s.t, x)
        + p.omega
        + 0.25 * np.log(s.det_ratio)
        + 0.5 * d
        - 1j * s.phi
        - 0.5 * quad
    )
    return np.exp(exponent)


def eval_gausson(omega, x0, v, theta, lam, t, x) -> ComplexArray:
    """G_{omega,x0,v,theta}(t, x) = exp[i(...) + d/2 + omega - lam |x - x0 - v t|^2]."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    x0 = np.atleast_1d(np.asarray(x0, dtype=float))
    v = np.atleast_1d(np.asarray(v, dtype=float))
    d = x0.shape[0]
    if x.shape[-1] != d:
        x = x[..., None]
    y = x - x0 - v * t
    r2 = np.sum(y * y, axis=-1)
    return np.exp(1j * _galilean_phase(theta, omega, v, lam, t, x) + 0.5 * d + omega - lam * r2)


def gausson_mass(lam: float, dim: int = 1, omega: float = 0.0) -> float:
    """||G||_{L2}^2 = e^{d + 2 omega} (pi / (2 lam))^{d/2}."""
    return float(np.exp(dim + 2.0 * omega) * (np.pi / (2.0 * lam)) ** (dim / 2))


def gausson_profile(lam: float, r: RealArray, dim: int = 1, omega: float = 0.0) -> RealArray:
    """|G| as a function of the distance to the center."""
    return np.exp(0.5 * dim + omega - lam * np.asarray(r) ** 2)
