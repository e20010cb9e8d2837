"""
Random complex inputs for the pointwise sweeps.

Moduli are log-uniform with uniform phases, mixed with adversarial clusters:
near the vacuum, near the unit circle, nearly equal pairs, exact zeros and
exact repeats.
"""

from __future__ import annotations

import numpy as np

from ..types import ComplexArray

PLANE_RANGE = (1e-12, 1e3)
DISK_RANGE = (1e-12, 1.0)


def _log_uniform(rng: np.random.Generator, lo: float, hi: float, size: int) -> np.ndarray:
    return np.exp(rng.uniform(np.log(lo), np.log(hi), size))


def _polar(rng: np.random.Generator, modulus: np.ndarray) -> ComplexArray:
    return modulus * np.exp(1j * rng.uniform(0.0, 2.0 * np.pi, modulus.shape))


def _cluster_sizes(size: int, weights: list[float]) -> list[int]:
    counts = [int(size * w) for w in weights]
    counts[0] += size - sum(counts)
    return counts


def sample_plane_pairs(rng: np.random.Generator, size: int) -> tuple[ComplexArray, ComplexArray]:
    """Pairs (z1, z2) in the plane with |z| <= 1e3."""
    n_gen, n_zero, n_unit, n_diag, n_null, n_same = _cluster_sizes(
        size, [0.6, 0.1, 0.1, 0.1, 0.05, 0.05]
    )
    lo, hi = PLANE_RANGE
    parts1, parts2 = [], []

    parts1.append(_polar(rng, _log_uniform(rng, lo, hi, n_gen)))
    parts2.append(_polar(rng, _log_uniform(rng, lo, hi, n_gen)))

    parts1.append(_polar(rng, _log_uniform(rng, lo, 1e-6, n_zero)))
    parts2.append(_polar(rng, _log_uniform(rng, lo, 1e-6, n_zero)))

    parts1.append(_polar(rng, 1.0 + 1e-6 * rng.standard_normal(n_unit)))
    parts2.append(_polar(rng, 1.0 + 1e-6 * rng.standard_normal(n_unit)))

    base = _polar(rng, _log_uniform(rng, lo, hi, n_diag))
    delta = _polar(rng, _log_uniform(rng, 1e-14, 1e-2, n_diag))
    parts1.append(base)
    parts2.append(base * (1.0 + delta))

    some = _polar(rng, _log_uniform(rng, lo, hi, n_null))
    flip = rng.random(n_null) < 0.5
    parts1.append(np.where(flip, 0.0, some))
    parts2.append(np.where(flip, some, 0.0))

    same = _polar(rng, _log_uniform(rng, lo, hi, n_same))
    parts1.append(same)
    parts2.append(same.copy())

    return np.concatenate(parts1), np.concatenate(parts2)


def sample_disk_pairs(rng: np.random.Generator, size: int) -> tuple[ComplexArray, ComplexArray]:
    """Pairs (z, zt) in the closed unit disk with z != 0."""
    n_gen, n_diag, n_edge, n_null, n_same = _cluster_sizes(size, [0.6, 0.15, 0.1, 0.1, 0.05])
    lo, hi = DISK_RANGE
    parts_z, parts_zt = [], []

    parts_z.append(_polar(rng, _log_uniform(rng, lo, hi, n_gen)))
    parts_zt.append(_polar(rng, _log_uniform(rng, lo, hi, n_gen)))

    base = _polar(rng, _log_uniform(rng, lo, hi, n_diag))
    delta = _polar(rng, _log_uniform(rng, 1e-14, 1e-2, n_diag))
    near = base * (1.0 + delta)
    parts_z.append(base)
    parts_zt.append(near / np.maximum(1.0, np.abs(near)))

    parts_z.append(np.exp(1j * rng.uniform(0.0, 2.0 * np.pi, n_edge)))
    parts_zt.append(_polar(rng, rng.uniform(0.0, 1.0, n_edge)))

    parts_z.append(_polar(rng, _log_uniform(rng, lo, hi, n_null)))
    parts_zt.append(np.zeros(n_null, dtype=complex))

    same = _polar(rng, _log_uniform(rng, lo, hi, n_same))
    parts_z.append(same)
    parts_zt.append(same.copy())

    return np.concatenate(parts_z), np.concatenate(parts_zt)
