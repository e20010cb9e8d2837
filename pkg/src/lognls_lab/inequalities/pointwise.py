"""
Pointwise inequalities behind the logarithmic nonlinearity.

Each ``*_terms`` function returns ``(margin, scale)`` for array inputs: the
margin is RHS - LHS (nonnegative when the inequality holds) and the scale is
the magnitude of the terms it was assembled from, which bounds the floating
evaluation error. ``0 ln 0`` is 0 throughout.
"""

from __future__ import annotations

import numpy as np

from ..infra.errors import DomainViolation
from ..types import RealArray

DISK_SLACK = 1e-12


def _abs2(z):
    return z.real**2 + z.imag**2


def _xlogx(a: RealArray) -> RealArray:
    """a ln a with 0 ln 0 = 0."""
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(a > 0, a * np.log(np.where(a > 0, a, 1.0)), 0.0)


def log_pair_terms(z1, z2) -> tuple[RealArray, RealArray]:
    """|Im((z2 ln|z2|^2 - z1 ln|z1|^2)(conj z2 - conj z1))| <= 2 |z2 - z1|^2.

    The left side equals |ln|z2|^2 - ln|z1|^2| |Im(z1 conj z2)| exactly, which
    avoids the cancellation of the expanded product near the diagonal.
    """
    z1 = np.asarray(z1, dtype=complex)
    z2 = np.asarray(z2, dtype=complex)
    a1, a2 = _abs2(z1), _abs2(z2)
    both = (a1 > 0) & (a2 > 0)
    with np.errstate(divide="ignore", invalid="ignore"):
        dl = np.where(both, np.log(np.where(both, a2, 1.0) / np.where(both, a1, 1.0)), 0.0)
    lhs = np.abs(dl) * np.abs(np.imag(z1 * np.conj(z2)))
    rhs = 2.0 * _abs2(z2 - z1)
    return rhs - lhs, rhs + lhs


def check_log_pair(z1, z2):
    margin, _ = log_pair_terms(z1, z2)
    return margin[()] if np.ndim(margin) == 0 else margin


def f1(z) -> RealArray:
    """F1(z) = |z|^2 (ln|z|^2 - 1)."""
    a = _abs2(np.asarray(z, dtype=complex))
    return _xlogx(a) - a


def f1_expansion_terms(z1, z2) -> tuple[RealArray, RealArray]:
    """F1(z1) <= F1(z2) + 2 Re(z2 conj zeta) ln|z2|^2 + 2|zeta|^2 (ln max(|z1|,|z2|) + 1).

    zeta = z1 - z2; the second term is 0 when z2 = 0 and the last when both vanish.
    """
    z1 = np.asarray(z1, dtype=complex)
    z2 = np.asarray(z2, dtype=complex)
    zeta = z1 - z2
    a1, a2 = _abs2(z1), _abs2(z2)
    amax = np.maximum(a1, a2)
    with np.errstate(divide="ignore", invalid="ignore"):
        log2 = np.log(np.where(a2 > 0, a2, 1.0))
        t2 = np.where(a2 > 0, 2.0 * np.real(z2 * np.conj(zeta)) * log2, 0.0)
        t3 = np.where(
            amax > 0, 2.0 * _abs2(zeta) * (0.5 * np.log(np.where(amax > 0, amax, 1.0)) + 1.0), 0.0
        )
    t1 = f1(z2)
    lhs = f1(z1)
    return t1 + t2 + t3 - lhs, np.abs(t1) + np.abs(t2) + np.abs(t3) + np.abs(lhs)


def check_F1_expansion(z1, z2):
    margin, _ = f1_expansion_terms(z1, z2)
    return margin[()] if np.ndim(margin) == 0 else margin


def zlogz(z):
    """F(z) = z ln|z| with F(0) = 0."""
    z = np.asarray(z, dtype=complex)
    a = np.abs(z)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(a > 0, z * np.log(np.where(a > 0, a, 1.0)), 0.0)


def zlogz_lipschitz_terms(z, zt) -> tuple[RealArray, RealArray]:
    """|F(zt) - F(z)| <= |z - zt| (3 - ln|z|) on the closed unit disk, z != 0."""
    z = np.asarray(z, dtype=complex)
    zt = np.asarray(zt, dtype=complex)
    az, azt = np.abs(z), np.abs(zt)
    if np.any(az > 1.0 + DISK_SLACK) or np.any(azt > 1.0 + DISK_SLACK):
        raise DomainViolation("moduli must not exceed 1")
    if np.any(az == 0):
        raise DomainViolation("z must be nonzero")
    rhs = np.abs(z - zt) * (3.0 - np.log(az))
    fz, fzt = zlogz(z), zlogz(zt)
    lhs = np.abs(fzt - fz)
    return rhs - lhs, rhs + np.abs(fz) + np.abs(fzt)


def check_zlogz_lipschitz(z, zt):
    margin, _ = zlogz_lipschitz_terms(z, zt)
    return margin[()] if np.ndim(margin) == 0 else margin
