"""
Error hierarchy for lognls-lab.

Every failure a command can surface derives from ``LabError``; the class
attribute ``exit_code`` is what ``lognls_lab.cli.main`` exits with.
"""

from __future__ import annotations

from typing import Any


class LabError(Exception):
    """Base class for all lab failures."""

    exit_code: int = 1

    def __init__(self, message: str, **context: Any):
        super().__init__(message)
        self.message = message
        self.context = context

    def __str__(self) -> str:
        if not self.context:
            return self.message
        details = ", ".join(f"{k}={v!r}" for k, v in sorted(self.context.items()))
        return f"{self.message} ({details})"


class ConfigInvalid(LabError):
    """Config file could not be parsed or validated."""

    exit_code = 2


class CheckFailed(LabError):
    """A certification or acceptance check did not pass."""

    exit_code = 1


# -------- validity gates (exit 3) --------


class ValidityGateError(LabError):
    exit_code = 3


class SeparationViolated(ValidityGateError):
    """Member centers came within 1/eps0 inside the observation window."""


class SupportsOverlap(ValidityGateError):
    """Partition supports of two members intersect."""


class SeparationTooSmall(ValidityGateError):
    """eps >= eps0 for a sum-of-Gaussians estimate."""


class BoxTooSmall(ValidityGateError):
    """A member center is closer to the box boundary than the required margin."""


# -------- numerical failures (exit 1) --------


class NumericalError(LabError):
    exit_code = 1


class PositivityLost(NumericalError):
    pass


class StepUnderflow(NumericalError):
    pass


class NonpositiveWidth(NumericalError):
    pass


class GridTooCoarse(NumericalError):
    pass


class NonFiniteSample(NumericalError):
    pass


class NonFiniteState(NumericalError):
    pass


class AliasingOverflow(NumericalError):
    pass


class BoundaryLeak(NumericalError):
    pass


class GridMismatch(NumericalError):
    pass


class InsufficientData(NumericalError):
    pass


class InsufficientSamples(NumericalError):
    pass


class QuadratureNonconvergent(NumericalError):
    pass


class DomainViolation(NumericalError):
    pass
