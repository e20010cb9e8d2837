"""
Gaussian tail integrals and their elementary majorants.

    int_y^inf e^{-g x^2} dx < e^{-g y^2} / (2 g y)
    I_n(R) = int_R^inf x^n e^{-g x^2} dx <= C_n R^{n-1} e^{-g R^2} / g,   R >= g^{-1/2}

with C_0 = C_1 = 1/2 and C_n = 1/2 + (2n - 1)/2 C_{n-2}. Tails are integrated
after the substitution x = R + s / (2 g R), which factors out e^{-g R^2} and
leaves an O(1) integrand, so the ratio tail/bound is computed without
underflow.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy.special import gamma as gamma_fn

from ..infra.errors import DomainViolation
from ..infra.logging import get_logger
from .quadrature import verified_quad
from .sweep import CheckReport

log = get_logger("inequalities")


@dataclass(frozen=True)
class TailBound:
    lhs: float
    bound: float
    ratio: float
    log_bound: float

    @property
    def strict(self) -> bool:
        return self.ratio < 1.0


def _scaled_moment(n: int, gamma: float, R: float) -> float:
    """int_0^inf (1 + s / (2 g R^2))^n e^{-s - s^2 / (4 g R^2)} ds."""
    c = 1.0 / (2.0 * gamma * R * R)

    def fn(s: float) -> float:
        return (1.0 + c * s) ** n * np.exp(-s - 0.5 * c * s * s)

    return verified_quad(fn, 0.0, np.inf)


def gauss_tail_1d(y: float, gamma: float) -> TailBound:
    """int_y^inf e^{-gamma x^2} dx against e^{-gamma y^2} / (2 gamma y)."""
    if y <= 0 or gamma <= 0:
        raise DomainViolation("y and gamma must be positive", y=y, gamma=gamma)
    ratio = _scaled_moment(0, gamma, y)
    log_bound = -gamma * y * y - np.log(2.0 * gamma * y)
    bound = float(np.exp(log_bound))
    return TailBound(lhs=ratio * bound, bound=bound, ratio=ratio, log_bound=float(log_bound))


@lru_cache(maxsize=None)
def moment_constant(n: int) -> float:
    if n < 0:
        raise DomainViolation("moment order must be nonnegative", n=n)
    if n <= 1:
        return 0.5
    return 0.5 + 0.5 * (2 * n - 1) * moment_constant(n - 2)


def gauss_tail_moments(n: int, gamma: float, R: float) -> TailBound:
    """I_n(R) against C_n R^{n-1} e^{-gamma R^2} / gamma (equality at n = 1)."""
    if gamma <= 0:
        raise DomainViolation("gamma must be positive", gamma=gamma)
    if R < gamma**-0.5 * (1.0 - 1e-12):
        raise DomainViolation("R must be at least gamma^(-1/2)", R=R, gamma=gamma)
    c_n = moment_constant(n)
    scaled = _scaled_moment(n, gamma, R)
    # I_n = e^{-g R^2} R^{n-1} / (2 g) * scaled
    ratio = scaled / (2.0 * c_n)
    log_bound = np.log(c_n) + (n - 1) * np.log(R) - gamma * R * R - np.log(gamma)
    bound = float(np.exp(log_bound))
    return TailBound(lhs=ratio * bound, bound=bound, ratio=ratio, log_bound=float(log_bound))


def sphere_area(dim: int) -> float:
    """Surface measure of the unit sphere in R^dim (2 for dim = 1)."""
    return float(2.0 * np.pi ** (dim / 2) / gamma_fn(dim / 2))


def gauss_tail_moments_radial(dim: int, n: int, gamma: float, R: float) -> TailBound:
    """int_{|x|>R} |x|^n e^{-gamma |x|^2} dx in R^dim against its radial majorant."""
    base = gauss_tail_moments(n + dim - 1, gamma, R)
    area = sphere_area(dim)
    return TailBound(
        lhs=area * base.lhs,
        bound=area * base.bound,
        ratio=base.ratio,
        log_bound=base.log_bound + float(np.log(area)),
    )


def tail_ladder_report(
    ys: Sequence[float] = (0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0),
    gammas: Sequence[float] = (0.25, 1.0, 4.0),
    orders: Sequence[int] = (0, 2, 3, 4, 5, 6),
    seed: int = 0,
) -> CheckReport:
    """Strictness of both tail bounds on a grid of (y, gamma) and moment orders.

    Margins are 1 - ratio; the order-1 bound is an identity and is excluded.
    """
    margins = []
    for gamma in gammas:
        for y in ys:
            margins.append(1.0 - gauss_tail_1d(y, gamma).ratio)
            R = max(y, gamma**-0.5)
            for n in orders:
                margins.append(1.0 - gauss_tail_moments(n, gamma, R).ratio)
    m = np.asarray(margins)
    report = CheckReport(
        name="gauss_tails",
        samples=int(m.size),
        violations=int(np.count_nonzero(m <= 0)),
        worst_margin=float(m.min()),
        worst_relative=float(m.min()),
        seed=seed,
    )
    log.info("gauss tail ladder: %d points, worst 1-ratio %.3e",
             report.samples, report.worst_margin)
    return report
