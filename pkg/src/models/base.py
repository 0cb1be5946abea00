"""
Shared behaviour of the model families

Every model predicts from a DesignSet and can report its parameter count and
running complexity. The compressed families share one evaluation path:

    y = rowsum( (H A) * (Mu W) )

with Mu the N x (M2 P) unfolding of the basis tensor and W the family's
(M2 P) x R1 weight matrix. Neither the regressor tensor X nor the full
coefficient tensor S is formed.
"""

from typing import ClassVar, Dict, Tuple

import numpy as np

from ..dataset import DesignSet
from ..errors import DimensionError
from .complexity import flop_count, param_count


class GmpModelBase:
    kind: ClassVar[str] = ''

    @property
    def dims(self) -> Tuple[int, int, int]:
        raise NotImplementedError

    @property
    def ranks(self) -> Tuple[int, ...]:
        return ()

    def check_design(self, design: DesignSet) -> None:
        if design.dims != self.dims:
            raise DimensionError(
                f"{self.kind} model has dims {self.dims} but the design set has {design.dims}"
            )

    def predict(self, design: DesignSet) -> np.ndarray:
        raise NotImplementedError

    def factors(self) -> Dict[str, np.ndarray]:
        """Named arrays that fully describe the model (used for files)"""
        raise NotImplementedError

    def num_params(self) -> int:
        return param_count(self.kind, self.dims, self.ranks)

    def flops(self) -> int:
        return flop_count(self.kind, self.dims, self.ranks)


class SeparableModel(GmpModelBase):
    """Compressed families: predict through the (M2 P) x R1 weight matrix"""

    a: np.ndarray

    def mode23_weights(self) -> np.ndarray:
        raise NotImplementedError

    def predict(self, design: DesignSet) -> np.ndarray:
        self.check_design(design)
        delayed = design.h @ self.a
        envelope = design.basis_matrix() @ self.mode23_weights()
        return np.sum(delayed * envelope, axis=1)


def frozen(array, name: str, ndim: int) -> np.ndarray:
    out = np.array(array, dtype=np.complex128)
    if out.ndim != ndim:
        raise DimensionError(f"{name} must have {ndim} dimensions, got shape {out.shape}")
    if 0 in out.shape:
        raise DimensionError(f"{name} has an empty dimension, got shape {out.shape}")
    out.flags.writeable = False
    return out
