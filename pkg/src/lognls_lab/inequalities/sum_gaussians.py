"""
Superposition defect of the logarithmic nonlinearity for sums of Gaussians.

Members are written as

    g_k(x) = exp[i theta_k + i p_k.x + omega_k - (x - x_k)^T L_k (x - x_k)]

with L_k complex symmetric, Re L_k positive definite. The defect

    D = g ln|g| - sum_k g_k ln|g_k|,    g = sum_k g_k

is evaluated relative to the dominant member: with m = max_k Re e_k at k*,
s = sum_{j != k*} exp(e_j - e_{k*}),

    D = g ln|1 + s| + sum_{k != k*} g_k (m - Re e_k)

which never forms the difference of two large logarithms.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..dynamics import GaussianParams, GaussianState
from ..infra.errors import DomainViolation, SeparationTooSmall
from ..infra.logging import get_logger
from ..types import ComplexArray, RealArray
from .quadrature import integrate_box
from .sweep import RTOL, CheckReport

log = get_logger("inequalities")

# box margin in units of lambda_minus^(-1/2)
BOX_MARGIN = 15.0


@dataclass(frozen=True, eq=False)
class GaussianTerm:
    lam_matrix: ComplexArray
    omega: float
    center: RealArray
    theta: float = 0.0
    phase_slope: RealArray = field(default_factory=lambda: np.zeros(1))

    def __post_init__(self) -> None:
        lm = np.atleast_2d(np.asarray(self.lam_matrix, dtype=complex))
        d = lm.shape[0]
        object.__setattr__(self, "lam_matrix", lm)
        object.__setattr__(self, "center", np.atleast_1d(np.asarray(self.center, dtype=float)))
        slope = np.broadcast_to(np.asarray(self.phase_slope, dtype=float), (d,)).copy()
        object.__setattr__(self, "phase_slope", slope)
        if np.linalg.eigvalsh(lm.real)[0] <= 0:
            raise DomainViolation("Re of the width matrix must be positive definite")

    @property
    def dim(self) -> int:
        return self.lam_matrix.shape[0]

    @property
    def real_spectrum(self) -> tuple[float, float]:
        eig = np.linalg.eigvalsh(self.lam_matrix.real)
        return float(eig[0]), float(eig[-1])

    def exponent(self, x) -> ComplexArray:
        """e_k(x) for points of shape (..., d)."""
        y = np.asarray(x, dtype=float) - self.center
        quad = np.einsum("...i,ij,...j->...", y, self.lam_matrix, y)
        return 1j * (self.theta + np.asarray(x, dtype=float) @ self.phase_slope) + self.omega - quad

    def __call__(self, x) -> ComplexArray:
        return np.exp(self.exponent(x))

    @classmethod
    def gausson(cls, p: GaussianParams, t: float) -> "GaussianTerm":
        """The Gausson member at time t."""
        d = p.dim
        return cls(
            lam_matrix=p.lam * np.eye(d, dtype=complex),
            omega=0.5 * d + p.omega,
            center=p.center(t),
            theta=p.theta + 2.0 * p.lam * p.omega * t - 0.5 * float(p.v @ p.v) * t,
            phase_slope=p.v,
        )

    @classmethod
    def from_state(cls, p: GaussianParams, s: GaussianState) -> "GaussianTerm":
        """A general Gaussian member at the time slice ``s``."""
        d = p.dim
        return cls(
            lam_matrix=0.5 * s.A,
            omega=p.omega + 0.5 * d + 0.25 * float(np.log(s.det_ratio)),
            center=p.center(s.t),
            theta=p.theta + 2.0 * p.lam * p.omega * s.t - 0.5 * float(p.v @ p.v) * s.t - s.phi,
            phase_slope=p.v,
        )


def exponents(terms: Sequence[GaussianTerm], x) -> ComplexArray:
    """Stacked exponents, shape (N, ...)."""
    return np.stack([t.exponent(x) for t in terms])


def scaled_log_defect(terms: Sequence[GaussianTerm], x) -> tuple[ComplexArray, RealArray]:
    """(D e^{-m}, m) with m = max_k Re e_k pointwise."""
    e = exponents(terms, x)
    if e.shape[0] == 1:
        return np.zeros(e.shape[1:], dtype=complex), e[0].real
    star = np.argmax(e.real, axis=0)
    e_star = np.take_along_axis(e, star[None], axis=0)[0]
    m = e_star.real
    others = np.arange(e.shape[0]).reshape((-1,) + (1,) * star.ndim) != star[None]
    rel = np.where(others, e - e_star, -np.inf)
    w = np.exp(rel)
    s = np.sum(w, axis=0)
    # g e^{-m} = e^{i Im e*} (1 + s); Re ln(1 + s) = 1/2 log1p(2 Re s + |s|^2)
    arg = 2.0 * s.real + s.real**2 + s.imag**2
    with np.errstate(divide="ignore", invalid="ignore"):
        log_mod = np.where(arg > -1.0, 0.5 * np.log1p(np.maximum(arg, -1.0)), 0.0)
    # g_k e^{-m} = e^{i Im e*} w_k
    tail = np.sum(np.where(others, w * (m - e.real), 0.0), axis=0)
    return np.exp(1j * e_star.imag) * ((1.0 + s) * log_mod + tail), m


def log_defect(terms: Sequence[GaussianTerm], x) -> ComplexArray:
    """D(x) = g ln|g| - sum_k g_k ln|g_k|."""
    scaled, m = scaled_log_defect(terms, x)
    return scaled * np.exp(m)


@dataclass(frozen=True)
class SeparationBounds:
    lam_minus: float
    lam_plus: float
    delta_omega: float
    epsilon: float
    epsilon0: float


def eps0(lam_minus: float, lam_plus: float, delta_omega: float, n: int, dim: int) -> float:
    """min(sqrt(l+) / max(sqrt(dw + 1), sqrt(ln N)), sqrt(l- / (d + 2)))."""
    if lam_minus <= 0:
        raise DomainViolation("lambda_minus must be positive", lam_minus=lam_minus)
    denom = max(np.sqrt(delta_omega + 1.0), np.sqrt(np.log(n)) if n > 1 else 0.0)
    return float(min(np.sqrt(lam_plus) / denom, np.sqrt(lam_minus / (dim + 2))))


def min_separation(centers: Sequence[RealArray]) -> float:
    c = np.asarray(centers, dtype=float)
    if len(c) < 2:
        return np.inf
    diff = c[:, None, :] - c[None, :, :]
    dist = np.sqrt(np.sum(diff * diff, axis=-1))
    return float(dist[~np.eye(len(c), dtype=bool)].min())


def separation_bounds(terms: Sequence[GaussianTerm]) -> SeparationBounds:
    spectra = np.array([t.real_spectrum for t in terms])
    omegas = np.array([t.omega for t in terms])
    lam_minus, lam_plus = float(spectra[:, 0].min()), float(spectra[:, 1].max())
    delta_omega = float(omegas.max() - omegas.min())
    sep = min_separation([t.center for t in terms])
    return SeparationBounds(
        lam_minus=lam_minus,
        lam_plus=lam_plus,
        delta_omega=delta_omega,
        epsilon=0.0 if np.isinf(sep) else 1.0 / sep,
        epsilon0=eps0(lam_minus, lam_plus, delta_omega, len(terms), terms[0].dim),
    )


def _require_separated(bounds: SeparationBounds) -> None:
    if bounds.epsilon >= bounds.epsilon0:
        raise SeparationTooSmall(
            "members are not well separated", epsilon=bounds.epsilon, epsilon0=bounds.epsilon0
        )


def _box(terms: Sequence[GaussianTerm], margin: float) -> tuple[np.ndarray, np.ndarray]:
    c = np.asarray([t.center for t in terms])
    return c.min(axis=0) - margin, c.max(axis=0) + margin


def _breakpoints(terms: Sequence[GaussianTerm]) -> list[float]:
    c = sorted(float(t.center[0]) for t in terms)
    mids = [0.5 * (a + b) for a, b in zip(c[:-1], c[1:])]
    return sorted(set(c + mids))


def _defect_norm(terms: Sequence[GaussianTerm], weight_origin: bool, lam_minus: float) -> float:
    lo, hi = _box(terms, BOX_MARGIN / np.sqrt(lam_minus))

    def integrand(pts: np.ndarray) -> np.ndarray:
        scaled, m = scaled_log_defect(terms, pts)
        val = np.abs(scaled) ** 2 * np.exp(2.0 * m)
        if weight_origin:
            val = val * np.sum(pts * pts, axis=-1)
        return val

    width = 1.0 / np.sqrt(lam_minus)
    return float(np.sqrt(integrate_box(integrand, lo, hi, width, _breakpoints(terms))))


@dataclass(frozen=True)
class LogBoundReport:
    lhs: float
    rhs_shape: float
    epsilon: float
    epsilon0: float

    @property
    def implied_constant(self) -> float:
        return self.lhs / self.rhs_shape if self.rhs_shape > 0 else 0.0


def sum_gaussian_log_bound(terms: Sequence[GaussianTerm]) -> LogBoundReport:
    """L2 norm of the superposition defect against its separation majorant.

    rhs_shape = N^{3/2} l+ eps^{-(d/2+1)} l-^{-1/2} exp(-l- / (4 eps^2) + max omega),
    the bound without its dimensional constant.
    """
    if not terms:
        raise DomainViolation("at least one member is required")
    b = separation_bounds(terms)
    _require_separated(b)
    n, d = len(terms), terms[0].dim
    if n == 1:
        return LogBoundReport(lhs=0.0, rhs_shape=0.0, epsilon=b.epsilon, epsilon0=b.epsilon0)
    lhs = _defect_norm(terms, weight_origin=False, lam_minus=b.lam_minus)
    omega_max = max(t.omega for t in terms)
    log_rhs = (
        1.5 * np.log(n)
        + np.log(b.lam_plus)
        - (0.5 * d + 1.0) * np.log(b.epsilon)
        - 0.5 * np.log(b.lam_minus)
        - b.lam_minus / (4.0 * b.epsilon**2)
        + omega_max
    )
    report = LogBoundReport(
        lhs=lhs, rhs_shape=float(np.exp(log_rhs)), epsilon=b.epsilon, epsilon0=b.epsilon0
    )
    log.debug("log bound: eps=%.4f lhs=%.3e implied C=%.3e",
              b.epsilon, lhs, report.implied_constant)
    return report


@dataclass(frozen=True)
class LadderFit:
    """ln(value) ~ intercept + slope * abscissa over a ladder."""

    abscissa: RealArray
    values: RealArray
    slope: float
    intercept: float
    expected_slope: float

    @property
    def relative_error(self) -> float:
        return abs(self.slope - self.expected_slope) / abs(self.expected_slope)

    def table(self) -> tuple[list[str], RealArray]:
        cols = ["abscissa", "value", "log_value"]
        return cols, np.column_stack([self.abscissa, self.values, np.log(self.values)])


def _fit_log(abscissa, values, expected: float) -> LadderFit:
    x = np.asarray(abscissa, dtype=float)
    y = np.asarray(values, dtype=float)
    if np.any(y <= 0) or x.size < 2:
        raise DomainViolation("ladder needs at least two positive values", values=y.tolist())
    slope, intercept = np.polyfit(x, np.log(y), 1)
    return LadderFit(x, y, float(slope), float(intercept), expected)


@dataclass(frozen=True)
class LogBoundLadder:
    separations: RealArray
    reports: list[LogBoundReport]
    fit: LadderFit

    @property
    def implied_constants(self) -> RealArray:
        return np.array([r.implied_constant for r in self.reports])


def log_bound_ladder(
    separations: Sequence[float] = (6.0, 8.0, 10.0, 12.0),
    lam: float = 1.0,
    dim: int = 1,
    omega: float = 0.0,
) -> LogBoundLadder:
    """Two isotropic members at distance L along the first axis; ln lhs fitted against L^2."""
    reports = []
    for L in separations:
        offset = np.zeros(dim)
        offset[0] = 0.5 * L
        terms = [
            GaussianTerm(lam * np.eye(dim), omega, -offset),
            GaussianTerm(lam * np.eye(dim), omega, offset),
        ]
        reports.append(sum_gaussian_log_bound(terms))
    L = np.asarray(separations, dtype=float)
    fit = _fit_log(L**2, [r.lhs for r in reports], expected=-lam / 4.0)
    log.info("log bound ladder: slope %.4f vs %.4f", fit.slope, fit.expected_slope)
    return LogBoundLadder(L, reports, fit)


def _gausson_terms(members: Sequence[GaussianParams], t: float) -> list[GaussianTerm]:
    if not members:
        raise DomainViolation("at least one member is required")
    for p in members:
        if not p.is_gausson or p.lam <= 0:
            raise DomainViolation("members must be Gaussons with lambda > 0")
    return [GaussianTerm.gausson(p, t) for p in members]


def weighted_log_diff_norm(members: Sequence[GaussianParams], t: float) -> float:
    """|| |x| (G ln|G|^2 - sum_k G_k ln|G_k|^2) ||_L2 for Gausson members at time t."""
    terms = _gausson_terms(members, t)
    b = separation_bounds(terms)
    _require_separated(b)
    if len(terms) == 1:
        return 0.0
    return 2.0 * _defect_norm(terms, weight_origin=True, lam_minus=b.lam_minus)


def weighted_norm_ladder(
    members: Sequence[GaussianParams],
    times: Sequence[float],
    v_star: float,
) -> LadderFit:
    """ln of the weighted defect norm fitted against t^2; expected slope -lam v*^2 / 4."""
    lam = members[0].lam
    values = [weighted_log_diff_norm(members, t) for t in times]
    t = np.asarray(times, dtype=float)
    fit = _fit_log(t**2, values, expected=-lam * v_star**2 / 4.0)
    log.info("weighted defect ladder: slope %.4f vs %.4f", fit.slope, fit.expected_slope)
    return fit


def pointwise_majorant_terms(
    terms: Sequence[GaussianTerm], lam: float, x: np.ndarray
) -> tuple[RealArray, RealArray]:
    """(margin, scale) of the pointwise majorant for every member j, shape (N, m).

    |G ln|G|^2 - sum G_k ln|G_k|^2| <=
        2 sum_{k != j} |G_k| [dw_j + dw_k + 3 + 2 ln N + lam |x - x_k|^2 + lam |x - x_j|^2]

    with dw_j = max omega - omega_j. Both sides are scaled by e^{-m}.
    """
    n = len(terms)
    scaled, m = scaled_log_defect(terms, x)
    lhs = 2.0 * np.abs(scaled)
    omegas = np.array([t.omega for t in terms])
    dw = omegas.max() - omegas
    r2 = np.stack([np.sum((x - t.center) ** 2, axis=-1) for t in terms])
    mod = np.exp(exponents(terms, x).real - m[None])
    margins, scales = [], []
    for j in range(n):
        bracket = dw[j] + dw[:, None] + 3.0 + 2.0 * np.log(n) + lam * r2 + lam * r2[j][None]
        rhs = 2.0 * np.sum(np.where(np.arange(n)[:, None] != j, mod * bracket, 0.0), axis=0)
        margins.append(rhs - lhs)
        scales.append(rhs + lhs)
    return np.array(margins), np.array(scales)


def pointwise_majorant_check(
    members: Sequence[GaussianParams],
    t: float,
    samples: int = 10_000,
    seed: int = 0,
) -> CheckReport:
    """Pointwise majorant at random points of the box around the centers, for every j."""
    terms = _gausson_terms(members, t)
    b = separation_bounds(terms)
    _require_separated(b)
    lam = members[0].lam
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    lo, hi = _box(terms, 5.0 / np.sqrt(lam))
    x = rng.uniform(lo, hi, size=(samples, terms[0].dim))
    margin, scale = pointwise_majorant_terms(terms, lam, x)
    with np.errstate(divide="ignore", invalid="ignore"):
        rel = np.where(scale > 0, margin / scale, 0.0)
    report = CheckReport(
        name="pointwise_majorant",
        samples=int(margin.size),
        violations=int(np.count_nonzero(margin < -RTOL * scale)),
        worst_margin=float(margin.min()),
        worst_relative=float(rel.min()),
        seed=seed,
    )
    log.info("pointwise majorant: %d evaluations, %d violations", report.samples, report.violations)
    return report
