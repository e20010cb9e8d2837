from __future__ import annotations

from typing import Literal, TypeAlias

import numpy as np
import numpy.typing as npt

RealArray: TypeAlias = npt.NDArray[np.float64]
ComplexArray: TypeAlias = npt.NDArray[np.complex128]

Splitting = Literal["lie", "strang"]
NormKind = Literal["l2", "h1", "fh1"]
