"""
Full GMP model

    y(t) = sum_{i<M1} sum_{j<M2} sum_{p<P} S[i, j, p] x(t-i) |x(t-j)|^p
"""

from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np

from ..dataset import DesignSet
from ..tensor import DenseTensor, contract_leading
from .base import GmpModelBase, frozen

# rows of the regressor tensor materialized at once
PREDICT_CHUNK = 4096


@dataclass(frozen=True, eq=False)
class GmpModel(GmpModelBase):
    s: np.ndarray   # M1 x M2 x P
    kind = 'gmp'

    def __post_init__(self):
        s = self.s.array if isinstance(self.s, DenseTensor) else self.s
        object.__setattr__(self, 's', frozen(s, 's', 3))

    @classmethod
    def from_vector(cls, vec: np.ndarray, dims: Tuple[int, int, int]) -> 'GmpModel':
        """Inverse of vectorize(): vec[i + j*M1 + p*M1*M2] = S[i, j, p]"""
        return cls(s=np.asarray(vec).reshape(dims, order='F'))

    @property
    def dims(self) -> Tuple[int, int, int]:
        return self.s.shape

    @property
    def tensor(self) -> DenseTensor:
        return DenseTensor.from_array(self.s)

    def vectorize(self) -> np.ndarray:
        return self.s.ravel(order='F')

    def predict(self, design: DesignSet) -> np.ndarray:
        self.check_design(design)
        m = design.m.array
        out = np.empty(design.n, dtype=np.complex128)
        for start in range(0, design.n, PREDICT_CHUNK):
            rows = slice(start, start + PREDICT_CHUNK)
            x = design.h[rows, :, None, None] * m[rows, None, :, :]
            out[rows] = contract_leading(x, self.s)
        return out

    def factors(self) -> Dict[str, np.ndarray]:
        return {'s': self.s}

    def expand(self) -> 'GmpModel':
        return self
