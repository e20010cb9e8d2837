"""
Convergence-checked quadrature.

Every value returned here has been computed twice at different resolutions;
results that move by more than ``CONVERGENCE_RTOL`` raise
QuadratureNonconvergent instead of being used.
"""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np
from scipy.integrate import quad

from ..infra.errors import QuadratureNonconvergent

CONVERGENCE_RTOL = 1e-3
GL_ORDER = 16
# points per vectorized evaluation in tensor rules
EVAL_CHUNK = 1 << 18


def verified_quad(
    fn: Callable[[float], float],
    a: float,
    b: float,
    points: Sequence[float] | None = None,
) -> float:
    """Adaptive Gauss-Kronrod (QUADPACK) with a resolution-doubling check."""
    kw = {}
    if points is not None and np.isfinite(a) and np.isfinite(b):
        inner = sorted(p for p in points if a < p < b)
        if inner:
            kw["points"] = inner
    coarse = quad(fn, a, b, epsabs=0.0, epsrel=1e-8, limit=100, full_output=1, **kw)
    fine = quad(fn, a, b, epsabs=0.0, epsrel=1e-11, limit=200, full_output=1, **kw)
    v0, v1 = coarse[0], fine[0]
    if not np.isfinite(v1):
        raise QuadratureNonconvergent("non-finite integral", a=a, b=b)
    if abs(fine[1]) > CONVERGENCE_RTOL * abs(v1) and abs(v1) > 0:
        raise QuadratureNonconvergent("error estimate too large", a=a, b=b, error=fine[1])
    if abs(v1 - v0) > CONVERGENCE_RTOL * abs(v1):
        raise QuadratureNonconvergent("refined quadrature disagrees", coarse=v0, fine=v1)
    return float(v1)


def _panel_rule(lo: float, hi: float, width: float) -> tuple[np.ndarray, np.ndarray]:
    panels = max(1, int(np.ceil((hi - lo) / width)))
    edges = np.linspace(lo, hi, panels + 1)
    xg, wg = np.polynomial.legendre.leggauss(GL_ORDER)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * xg[None, :]).ravel()
    weights = (half[:, None] * wg[None, :]).ravel()
    return nodes, weights


def _tensor_sum(fn, lo: np.ndarray, hi: np.ndarray, width: float) -> float:
    rules = [_panel_rule(a, b, width) for a, b in zip(lo, hi)]
    first_nodes, first_weights = rules[0]
    rest = rules[1:]
    if rest:
        node_mesh = np.meshgrid(*[r[0] for r in rest], indexing="ij")
        weight_mesh = np.meshgrid(*[r[1] for r in rest], indexing="ij")
        rest_nodes = np.stack(node_mesh, axis=-1).reshape(-1, len(rest))
        rest_weights = np.prod(np.stack(weight_mesh, axis=-1), axis=-1).ravel()
    else:
        rest_nodes, rest_weights = np.zeros((1, 0)), np.ones(1)
    rows = max(1, EVAL_CHUNK // rest_nodes.shape[0])
    total = 0.0
    for start in range(0, first_nodes.size, rows):
        x0 = first_nodes[start:start + rows]
        pts = np.concatenate(
            [
                np.repeat(x0, rest_nodes.shape[0])[:, None],
                np.tile(rest_nodes, (x0.size, 1)),
            ],
            axis=1,
        )
        w = np.repeat(first_weights[start:start + rows], rest_nodes.shape[0]) * np.tile(
            rest_weights, x0.size
        )
        total += float(np.sum(w * fn(pts)))
    return total


def tensor_quad(
    fn: Callable[[np.ndarray], np.ndarray],
    lo: Sequence[float],
    hi: Sequence[float],
    width: float,
) -> float:
    """Composite tensor Gauss-Legendre on a box for a vectorized ``fn(points (m, d))``.

    Panels of size ``width`` are compared against panels of half that size.
    """
    lo_a = np.asarray(lo, dtype=float)
    hi_a = np.asarray(hi, dtype=float)
    coarse = _tensor_sum(fn, lo_a, hi_a, width)
    fine = _tensor_sum(fn, lo_a, hi_a, 0.5 * width)
    if not np.isfinite(fine):
        raise QuadratureNonconvergent("non-finite integral")
    if abs(fine - coarse) > CONVERGENCE_RTOL * abs(fine):
        raise QuadratureNonconvergent("refined quadrature disagrees", coarse=coarse, fine=fine)
    return fine


def integrate_box(
    fn: Callable[[np.ndarray], np.ndarray],
    lo: Sequence[float],
    hi: Sequence[float],
    width: float,
    breakpoints: Sequence[float] = (),
) -> float:
    """Verified integral of ``fn(points (m, d))`` over a box.

    One dimension goes through adaptive Gauss-Kronrod with ``breakpoints``;
    higher dimensions use :func:`tensor_quad`.
    """
    if len(lo) == 1:
        return verified_quad(
            lambda s: float(fn(np.array([[s]]))[0]), float(lo[0]), float(hi[0]), breakpoints
        )
    return tensor_quad(fn, lo, hi, width)
