"""
1D breathers: the width r(t) of a Gaussian solution in one dimension.

    r'' = 1/r^3 - 2 lam / r,     r(0) = alpha_r > 0,  r'(0) = alpha_i
    Phi' = 1/(2 r^2) + lam ln(r / alpha_r) - lam

H = r'^2/2 + 1/(2 r^2) + 2 lam ln r is conserved. For lam > 0 the width is
periodic; for lam < 0 it grows like 2 t sqrt(|lam| ln t).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.integrate import solve_ivp

from ..infra.errors import DomainViolation, NonpositiveWidth, StepUnderflow
from ..infra.logging import get_logger
from ..types import RealArray
from .params import BreatherState

log = get_logger("dynamics")

DEFAULT_TOL = 1e-10


def first_integral(r: float | RealArray, rdot: float | RealArray, lam: float):
    return 0.5 * rdot**2 + 0.5 / r**2 + 2.0 * lam * np.log(r)


def _rhs(lam: float, alpha_r: float):
    def rhs(_t: float, y: np.ndarray) -> list[float]:
        r, rdot, _phi = y
        return [rdot, 1.0 / r**3 - 2.0 * lam / r, 0.5 / r**2 + lam * np.log(r / alpha_r) - lam]

    return rhs


def _width_event(_t: float, y: np.ndarray) -> float:
    return y[0]


_width_event.terminal = True  # type: ignore[attr-defined]
_width_event.direction = -1  # type: ignore[attr-defined]


def _integrate(y0, t_span, lam, alpha_r, tol, t_eval=None, events=None):
    evs = [_width_event] + list(events or [])
    sol = solve_ivp(
        _rhs(lam, alpha_r), t_span, y0, method="DOP853", t_eval=t_eval,
        rtol=tol, atol=tol, events=evs,
    )
    if sol.status == -1:
        raise StepUnderflow(f"breather integration failed: {sol.message}")
    if sol.t_events[0].size:
        raise NonpositiveWidth("breather width reached 0", t=float(sol.t_events[0][0]))
    if np.any(sol.y[0] <= 0):
        raise NonpositiveWidth("breather width became nonpositive")
    return sol


def _states(sol, lam: float) -> list[BreatherState]:
    r, rdot, phi = sol.y
    h = first_integral(r, rdot, lam)
    return [
        BreatherState(t=float(t), r=float(a), rdot=float(b), phi=float(c), first_integral=float(e))
        for t, a, b, c, e in zip(sol.t, r, rdot, phi, h)
    ]


def evolve_breather(
    alpha_r: float,
    alpha_i: float,
    lam: float,
    t_end: float,
    tol: float = DEFAULT_TOL,
    times: Sequence[float] | None = None,
) -> list[BreatherState]:
    """States on the accepted steps, or on ``times`` when given."""
    if alpha_r <= 0:
        raise DomainViolation("alpha_r must be positive", alpha_r=alpha_r)
    if lam == 0:
        raise DomainViolation("lambda must be nonzero")
    t_eval = None if times is None else np.asarray(times, dtype=float)
    sol = _integrate([alpha_r, alpha_i, 0.0], (0.0, t_end), lam, alpha_r, tol, t_eval=t_eval)
    states = _states(sol, lam)
    drift = abs(states[-1].first_integral - states[0].first_integral)
    if drift > tol * max(abs(t_end), 1.0):
        log.warning("breather first integral drift %.3e exceeds tol*t_end", drift)
    return states


@dataclass(frozen=True)
class BreatherPeriod:
    period: float
    r_error: float
    rdot_error: float
    first_integral_drift: float


def detect_breather_period(
    alpha_r: float,
    alpha_i: float,
    lam: float,
    tol: float = DEFAULT_TOL,
    horizon: float = 50.0,
    max_horizon: float = 1e4,
) -> BreatherPeriod:
    """Period from two consecutive width maxima (r' crossing 0 downward)."""
    if lam <= 0:
        raise DomainViolation("periodic breathers need lambda > 0", lam=lam)

    def maximum(_t: float, y: np.ndarray) -> float:
        return y[1]

    maximum.direction = -1  # type: ignore[attr-defined]

    y0 = [alpha_r, alpha_i, 0.0]
    while True:
        sol = _integrate(y0, (0.0, horizon), lam, alpha_r, tol, events=[maximum])
        peaks = sol.t_events[1]
        peaks = peaks[peaks > 1e-9]
        if peaks.size >= 2:
            break
        if horizon >= max_horizon:
            raise DomainViolation("no two width maxima found", horizon=horizon)
        horizon *= 4

    period = float(peaks[1] - peaks[0])
    end = _integrate(y0, (0.0, period), lam, alpha_r, tol, t_eval=[0.0, period])
    r, rdot, _ = end.y[:, -1]
    h0 = first_integral(alpha_r, alpha_i, lam)
    h1 = first_integral(r, rdot, lam)
    log.info("breather period %.12g (alpha=(%g, %g), lam=%g)", period, alpha_r, alpha_i, lam)
    return BreatherPeriod(
        period=period,
        r_error=float(abs(r - alpha_r)),
        rdot_error=float(abs(rdot - alpha_i)),
        first_integral_drift=float(abs(h1 - h0) / max(abs(h0), 1e-300)),
    )


@dataclass(frozen=True)
class AsymptoticReport:
    times: RealArray
    ratios: RealArray
    monotone_tail: bool

    @property
    def final_ratio(self) -> float:
        return float(self.ratios[-1])


def breather_asymptotic_check(
    alpha_r: float,
    alpha_i: float,
    lam: float,
    t_end: float = 1e6,
    tol: float = DEFAULT_TOL,
    points_per_decade: int = 10,
) -> AsymptoticReport:
    """r(t) / (2 t sqrt(|lam| ln t)) on a logarithmic grid from t = 10 to t_end.

    Integration proceeds one decade at a time so the step size can grow with r.
    """
    if lam >= 0:
        raise DomainViolation("asymptotic check needs lambda < 0", lam=lam)
    if t_end < 1e3:
        raise DomainViolation("t_end must be at least 1e3", t_end=t_end)

    decades = np.log10(t_end) - 1.0
    grid = np.logspace(1.0, np.log10(t_end), int(np.ceil(decades * points_per_decade)) + 1)
    edges = [0.0] + [10.0**k for k in range(1, int(np.floor(np.log10(t_end))) + 1)]
    if edges[-1] < t_end:
        edges.append(t_end)

    y = np.array([alpha_r, alpha_i, 0.0])
    times, widths = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        inside = grid[(grid > a) & (grid <= b)]
        t_eval = np.unique(np.concatenate([inside, [b]]))
        sol = _integrate(y, (a, b), lam, alpha_r, tol, t_eval=t_eval)
        keep = np.isin(sol.t, inside)
        times.extend(sol.t[keep])
        widths.extend(sol.y[0][keep])
        y = sol.y[:, -1]

    t = np.asarray(times)
    ratios = np.asarray(widths) / (2.0 * t * np.sqrt(abs(lam) * np.log(t)))
    tail = ratios[len(ratios) // 2:]
    dist = np.abs(tail - 1.0)
    monotone = bool(np.all(np.diff(dist) <= 0))
    if not monotone:
        log.warning("asymptotic ratio does not approach 1 monotonically on the tail")
    log.info("breather asymptotic ratio at t=%g: %.6f", t[-1], ratios[-1])
    return AsymptoticReport(times=t, ratios=ratios, monotone_tail=monotone)


def breather_trajectory_table(states: Sequence[BreatherState]) -> tuple[list[str], RealArray]:
    cols = ["t", "r", "rdot", "phi", "first_integral"]
    rows = np.array([[s.t, s.r, s.rdot, s.phi, s.first_integral] for s in states])
    return cols, rows
