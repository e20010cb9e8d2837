"""
Conserved functionals and norms on the grid.

    M = ||u||^2,   J = Im int conj(u) grad u,
    E = 1/2 ||grad u||^2 - lam int |u|^2 (ln(eps^2 + |u|^2) - 1)

Derivatives are spectral; integrals are h^d Riemann sums, which are
spectrally accurate for smooth fields decaying inside the box.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..types import ComplexArray, RealArray
from .config import SolverConfig
from .grid import Field, Grid, same_grid


@dataclass(frozen=True, eq=False)
class NormReport:
    mass: float
    momentum: RealArray
    energy: float
    l2: float
    h1: float
    fh1: float
    linf: float
    # exp(1 - E / (2 lam M)): no solution's sup norm drops below it (lam > 0)
    linf_floor: float

    def as_row(self) -> list[float]:
        return [self.mass, *self.momentum, self.energy, self.l2, self.h1, self.fh1, self.linf]

    @staticmethod
    def columns(dim: int) -> list[str]:
        return ["mass", *[f"momentum_{i}" for i in range(dim)], "energy", "l2", "h1", "fh1", "linf"]


def gradient(values: ComplexArray, grid: Grid) -> ComplexArray:
    """Spectral gradient, stacked on a leading axis of length d."""
    u_hat = np.fft.fftn(values)
    return np.stack([np.fft.ifftn(1j * k * u_hat) for k in grid.deriv_k])


def _sq(z: ComplexArray) -> RealArray:
    return z.real**2 + z.imag**2


def gradient_sq_norm(values: ComplexArray, grid: Grid) -> float:
    """||grad u||^2 through Parseval."""
    u_hat = np.fft.fftn(values)
    return float(grid.cell * np.sum(grid.k2 * _sq(u_hat)) / values.size)


def potential_density(values: ComplexArray, lam: float, eps: float) -> RealArray:
    rho = _sq(values)
    return -lam * rho * (np.log(eps**2 + rho) - 1.0)


def norms(field: Field, cfg: SolverConfig) -> NormReport:
    g = field.grid
    u = field.values
    rho = _sq(u)
    mass = float(g.cell * rho.sum())

    grad = gradient(u, g)
    momentum = np.array([g.cell * np.sum(np.imag(np.conj(u) * du)) for du in grad])
    grad_sq = gradient_sq_norm(u, g)
    energy = 0.5 * grad_sq + float(g.cell * potential_density(u, cfg.lam, cfg.eps).sum())
    moment = float(g.cell * np.sum(g.r2 * rho))

    if cfg.lam > 0 and mass > 0:
        floor = float(np.exp(1.0 - energy / (2.0 * cfg.lam * mass)))
    else:
        floor = float("nan")
    return NormReport(
        mass=mass,
        momentum=momentum,
        energy=energy,
        l2=float(np.sqrt(mass)),
        h1=float(np.sqrt(mass + grad_sq)),
        fh1=float(np.sqrt(mass + moment)),
        linf=float(np.sqrt(rho.max())),
        linf_floor=floor,
    )


def l2_distance(a: Field, b: Field) -> float:
    g = same_grid(a, b)
    return float(np.sqrt(g.cell * np.sum(_sq(a.values - b.values))))


def h1_distance(a: Field, b: Field) -> float:
    g = same_grid(a, b)
    w = a.values - b.values
    return float(np.sqrt(g.cell * np.sum(_sq(w)) + gradient_sq_norm(w, g)))


def fh1_distance(a: Field, b: Field) -> float:
    """(||a - b||^2 + || |x| (a - b) ||^2)^(1/2)."""
    g = same_grid(a, b)
    rho = _sq(a.values - b.values)
    return float(np.sqrt(g.cell * np.sum((1.0 + g.r2) * rho)))


def distances(a: Field, b: Field) -> dict[str, float]:
    return {"l2": l2_distance(a, b), "h1": h1_distance(a, b), "fh1": fh1_distance(a, b)}
