"""
GMP-CP model: S[i, j, p] = sum_r A[i, r] B[j, r] C[p, r]
"""

from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np

from ..errors import DimensionError
from ..tensor import khatri_rao
from .base import SeparableModel, frozen
from .gmp import GmpModel


@dataclass(frozen=True, eq=False)
class CpModel(SeparableModel):
    a: np.ndarray   # M1 x R
    b: np.ndarray   # M2 x R
    c: np.ndarray   # P x R
    kind = 'cp'

    def __post_init__(self):
        for name in ('a', 'b', 'c'):
            object.__setattr__(self, name, frozen(getattr(self, name), name, 2))
        if not (self.a.shape[1] == self.b.shape[1] == self.c.shape[1]):
            raise DimensionError(
                f"CP factors need equal column counts, got {self.a.shape}, {self.b.shape}, {self.c.shape}"
            )

    @property
    def dims(self) -> Tuple[int, int, int]:
        return self.a.shape[0], self.b.shape[0], self.c.shape[0]

    @property
    def ranks(self) -> Tuple[int]:
        return (self.a.shape[1],)

    def mode23_weights(self) -> np.ndarray:
        # column r is kron(c_r, b_r)
        return khatri_rao(self.c, self.b)

    def expand(self) -> GmpModel:
        return GmpModel(s=np.einsum('ir,jr,pr->ijp', self.a, self.b, self.c))

    def factors(self) -> Dict[str, np.ndarray]:
        return {'a': self.a, 'b': self.b, 'c': self.c}
