from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..infra.errors import InsufficientData
from ..infra.logging import get_logger

log = get_logger("multisoliton")

MIN_SAMPLES = 6
# samples must exceed the floor by this factor to enter the fit
FLOOR_FACTOR = 10.0


@dataclass(frozen=True)
class DecayFit:
    """ln err(t) ~ a + b t + c t^2 over ``window``."""

    a: float
    b: float
    c: float
    r_squared: float
    window: tuple[float, float]
    floor: float
    samples: int

    def predict(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return self.a + self.b * t + self.c * t * t

    def as_dict(self) -> dict[str, float | int | list[float]]:
        return {
            "a": self.a,
            "b": self.b,
            "c": self.c,
            "r_squared": self.r_squared,
            "window": list(self.window),
            "floor": self.floor,
            "samples": self.samples,
        }


def fit_gaussian_decay(
    times: Sequence[float],
    errors: Sequence[float],
    floor: float = 0.0,
    weights: Sequence[float] | None = None,
) -> DecayFit:
    """Weighted least squares of ln(errors) on {1, t, t^2}.

    Only samples above FLOOR_FACTOR * floor are used. Default weights are
    ln(err / floor) when a floor is known, so samples closer to the floor count
    less; without a floor every sample has weight 1.
    """
    t = np.asarray(times, dtype=float)
    e = np.asarray(errors, dtype=float)
    keep = np.isfinite(e) & (e > FLOOR_FACTOR * floor) & (e > 0)
    if weights is not None:
        w = np.asarray(weights, dtype=float)
    elif floor > 0:
        with np.errstate(divide="ignore"):
            w = np.log(np.where(keep, e, 1.0) / floor)
    else:
        w = np.ones_like(t)
    t, y, w = t[keep], np.log(e[keep]), w[keep]
    if t.size < MIN_SAMPLES:
        raise InsufficientData(
            "too few samples above the floor", samples=int(t.size), needed=MIN_SAMPLES, floor=floor
        )

    # np.polyfit weights multiply residuals, so pass sqrt of the statistical weights
    c, b, a = np.polyfit(t, y, 2, w=np.sqrt(w))
    fitted = a + b * t + c * t * t
    mean = np.average(y, weights=w)
    ss_tot = float(np.sum(w * (y - mean) ** 2))
    ss_res = float(np.sum(w * (y - fitted) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    fit = DecayFit(
        a=float(a),
        b=float(b),
        c=float(c),
        r_squared=float(r2),
        window=(float(t.min()), float(t.max())),
        floor=float(floor),
        samples=int(t.size),
    )
    log.debug("decay fit on %d samples: c=%.5f r2=%.5f", fit.samples, fit.c, fit.r_squared)
    return fit
