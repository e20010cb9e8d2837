"""
Tail and overlap integrals of Gaussons outside their partition pieces.

Radial integrals are taken from the inner edge r_a of the weight, with
e^{-a r_a^2} factored out of e^{-a r^2}, and reported as logarithms, so
normalized values such as tail * t^3 e^{lam (v_* t)^2 / 4} never underflow.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.special import erfc

from ..dynamics import GaussianParams
from ..inequalities import integrate_box, sphere_area, verified_quad
from ..infra.errors import DomainViolation
from ..infra.logging import get_logger
from ..types import RealArray
from .partition import INNER, OUTER, smoothstep

log = get_logger("localized")

TAIL_QUANTITIES = ("l2", "grad_l2", "lp", "r3_l2")
ORTHOGONALITY_QUANTITIES = ("weighted_overlap", "grad_overlap", "grad_grad_overlap")
# overlap integrals cover |y| <= OVERLAP_RADIUS / sqrt(2 lam) around the midpoint
OVERLAP_RADIUS = 8.0
TAIL_CUT = 80.0


def _log_radial(
    dim: int,
    decay: float,
    powers: Sequence[tuple[float, int]],
    r_start: float,
    weight: Callable[[float], float] | None = None,
    r_flat: float | None = None,
) -> float:
    """ln S_{d-1} int_{r_start}^inf r^{d-1} sum_i c_i r^{k_i} e^{-decay r^2} w(r) dr."""

    def fn(r: float) -> float:
        poly = sum(c * r**k for c, k in powers)
        w = 1.0 if weight is None else weight(r)
        return r ** (dim - 1) * poly * w * np.exp(-decay * (r - r_start) * (r + r_start))

    # the scaled integrand is below e^{-TAIL_CUT} of its start value past r_hi
    r_hi = np.sqrt(r_start**2 + TAIL_CUT / decay) + 1.0
    points = [r_flat] if r_flat is not None else None
    val = verified_quad(fn, r_start, r_hi, points)
    if val <= 0:
        return -np.inf
    return float(np.log(sphere_area(dim)) + np.log(val) - decay * r_start**2)


def _require_gausson(p: GaussianParams) -> None:
    if not p.is_gausson or p.lam <= 0:
        raise DomainViolation("a Gausson with lambda > 0 is required")


@dataclass(frozen=True)
class TailReport:
    t: float
    log_values: dict[str, float]
    log_normalized: dict[str, float]

    @property
    def values(self) -> dict[str, float]:
        return {k: float(np.exp(v)) for k, v in self.log_values.items()}

    @property
    def normalized(self) -> dict[str, float]:
        return {k: float(np.exp(v)) for k, v in self.log_normalized.items()}


def gausson_tail_report(member: GaussianParams, t: float, v_star: float) -> TailReport:
    """Norms of G_j weighted by 1 - psi_j, raw and times t^3 e^{lam (v_* t)^2 / 4}."""
    _require_gausson(member)
    if t <= 0:
        raise DomainViolation("t must be positive", t=t)
    lam, d, om = member.lam, member.dim, member.omega
    v2 = float(member.v @ member.v)
    r0 = 0.5 * v_star * t + 0.5 * (INNER + OUTER)
    r_a, r_b = r0 - 1.0, r0 + 1.0

    def outside(r: float) -> float:
        return float(1.0 - smoothstep(r - r0))

    amp2 = d + 2.0 * om
    p = 2.0 + 1.0 / d
    logs = {
        "l2": 0.5 * (amp2 + _log_radial(d, 2 * lam, [(1.0, 0)], r_a, outside, r_b)),
        "grad_l2": 0.5
        * (amp2 + _log_radial(d, 2 * lam, [(4 * lam**2, 2), (v2, 0)], r_a, outside, r_b)),
        "lp": (p * (0.5 * d + om) + _log_radial(d, p * lam, [(1.0, 0)], r_a, outside, r_b)) / p,
        "r3_l2": 0.5 * (amp2 + _log_radial(d, 2 * lam, [(1.0, 6)], r_a, outside, r_b)),
    }
    shift = 3.0 * np.log(t) + lam * (v_star * t) ** 2 / 4.0
    return TailReport(
        t=float(t), log_values=logs, log_normalized={k: v + shift for k, v in logs.items()}
    )


def tail_ladder(
    member: GaussianParams, times: Sequence[float], v_star: float
) -> tuple[list[str], RealArray]:
    """Columns t, raw and normalized values of every tail quantity."""
    reports = [gausson_tail_report(member, t, v_star) for t in times]
    cols = ["t", *TAIL_QUANTITIES, *[f"{k}_normalized" for k in TAIL_QUANTITIES]]
    rows = [
        [r.t, *[r.values[k] for k in TAIL_QUANTITIES], *[r.normalized[k] for k in TAIL_QUANTITIES]]
        for r in reports
    ]
    return cols, np.array(rows)


def ladder_decreasing(reports: Sequence[TailReport] | Sequence["OverlapReport"]) -> bool:
    """Every normalized quantity strictly decreases along the ladder."""
    for a, b in zip(reports, reports[1:]):
        if any(b.log_normalized[k] >= a.log_normalized[k] for k in a.log_normalized):
            return False
    return True


@dataclass(frozen=True)
class OuterNorm:
    value: float
    closed_form: float | None


def gausson_outer_norm(lam: float, dim: int, omega: float, R: float) -> OuterNorm:
    """||G||_{L2(|x - x*| > R)}.

    In one dimension the closed form sqrt(e^{1+2w} sqrt(pi/2lam) erfc(sqrt(2lam) R))
    is returned alongside.
    """
    if lam <= 0 or R < 0:
        raise DomainViolation("need lambda > 0 and R >= 0", lam=lam, R=R)
    log_sq = dim + 2.0 * omega + _log_radial(dim, 2.0 * lam, [(1.0, 0)], R)
    closed = None
    if dim == 1:
        sq = np.exp(1.0 + 2.0 * omega) * np.sqrt(np.pi / (2.0 * lam))
        closed = float(np.sqrt(sq * erfc(np.sqrt(2.0 * lam) * R)))
    return OuterNorm(value=float(np.exp(0.5 * log_sq)), closed_form=closed)


@dataclass(frozen=True)
class OverlapReport:
    t: float
    separation: float
    log_values: dict[str, float]
    log_normalized: dict[str, float]
    # ln value + lam s^2 / 2: the part left after the Gaussian factor
    log_prefactor: dict[str, float]

    @property
    def values(self) -> dict[str, float]:
        return {k: float(np.exp(v)) for k, v in self.log_values.items()}


def gausson_orthogonality_report(
    member_j: GaussianParams,
    member_k: GaussianParams,
    t: float,
    v_star: float,
    t_offset: float = 0.0,
) -> OverlapReport:
    """Overlaps of |G_j|, |grad G_j| with |G_k|, |grad G_k| at centers placed at t_offset + t.

    |G_j||G_k| = e^{d + w_j + w_k - lam s^2 / 2} e^{-2 lam |x - m|^2} with m the
    midpoint, so the weighted overlap has a closed form and the gradient
    overlaps reduce to integrals against a centered Gaussian.
    """
    _require_gausson(member_j)
    _require_gausson(member_k)
    if member_j.lam != member_k.lam:
        raise DomainViolation("members must share lambda")
    lam, d = member_j.lam, member_j.dim
    tau = t_offset + t
    cj, ck = member_j.center(tau), member_k.center(tau)
    s = float(np.linalg.norm(cj - ck))
    m = 0.5 * (cj + ck)
    log_pref = d + member_j.omega + member_k.omega - lam * s * s / 2.0
    vj2, vk2 = float(member_j.v @ member_j.v), float(member_k.v @ member_k.v)
    dj = m - cj
    dk = m - ck

    base = (np.pi / (2.0 * lam)) ** (d / 2)
    weighted = base * (1.0 + float(dj @ dj) + d / (4.0 * lam))

    def grad_mod(y: np.ndarray, shift: np.ndarray, v2: float) -> np.ndarray:
        z = y + shift
        return np.sqrt(4.0 * lam**2 * np.sum(z * z, axis=-1) + v2)

    def gauss(y: np.ndarray) -> np.ndarray:
        return np.exp(-2.0 * lam * np.sum(y * y, axis=-1))

    half = OVERLAP_RADIUS / np.sqrt(2.0 * lam)
    lo, hi = [-half] * d, [half] * d
    width = 2.0 / np.sqrt(2.0 * lam)
    grad_overlap = integrate_box(lambda y: gauss(y) * grad_mod(y, dj, vj2), lo, hi, width)
    grad_grad = integrate_box(
        lambda y: gauss(y) * grad_mod(y, dj, vj2) * grad_mod(y, dk, vk2), lo, hi, width
    )
    raw = {
        "weighted_overlap": weighted,
        "grad_overlap": grad_overlap,
        "grad_grad_overlap": grad_grad,
    }
    logs = {k: log_pref + float(np.log(v)) for k, v in raw.items()}
    shift = (np.log(t) if t > 0 else -np.inf) + lam * (v_star * t) ** 2 / 2.0
    return OverlapReport(
        t=float(t),
        separation=s,
        log_values=logs,
        log_normalized={k: v + shift for k, v in logs.items()},
        log_prefactor={k: v + lam * s * s / 2.0 for k, v in logs.items()},
    )


def orthogonality_ladder(
    member_j: GaussianParams,
    member_k: GaussianParams,
    times: Sequence[float],
    v_star: float,
    t_offset: float = 0.0,
) -> tuple[list[str], RealArray, list[OverlapReport]]:
    reports = [
        gausson_orthogonality_report(member_j, member_k, t, v_star, t_offset) for t in times
    ]
    q = ORTHOGONALITY_QUANTITIES
    cols = ["t", "separation", *q, *[f"{k}_normalized" for k in q]]
    rows = [
        [r.t, r.separation, *[r.values[k] for k in q],
         *[float(np.exp(r.log_normalized[k])) for k in q]]
        for r in reports
    ]
    return cols, np.array(rows), reports
