from .common import ComplexArray, NormKind, RealArray, Splitting

__all__ = ["ComplexArray", "NormKind", "RealArray", "Splitting"]
