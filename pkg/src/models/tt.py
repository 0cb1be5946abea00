"""
GMP-TT model: S[i, j, p] = sum_{r1, r2} A[i, r1] B[r1, j, r2] C[r2, p]
"""

from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np

from ..errors import DimensionError
from .base import SeparableModel, frozen
from .gmp import GmpModel


@dataclass(frozen=True, eq=False)
class TtModel(SeparableModel):
    a: np.ndarray       # M1 x R1
    bcore: np.ndarray   # R1 x M2 x R2
    c: np.ndarray       # R2 x P
    kind = 'tt'

    def __post_init__(self):
        object.__setattr__(self, 'a', frozen(self.a, 'a', 2))
        object.__setattr__(self, 'bcore', frozen(self.bcore, 'bcore', 3))
        object.__setattr__(self, 'c', frozen(self.c, 'c', 2))
        if self.a.shape[1] != self.bcore.shape[0] or self.bcore.shape[2] != self.c.shape[0]:
            raise DimensionError(
                f"TT cores do not chain: a {self.a.shape}, bcore {self.bcore.shape}, c {self.c.shape}"
            )

    @property
    def dims(self) -> Tuple[int, int, int]:
        return self.a.shape[0], self.bcore.shape[1], self.c.shape[1]

    @property
    def ranks(self) -> Tuple[int, int]:
        return self.bcore.shape[0], self.bcore.shape[2]

    def mode23_weights(self) -> np.ndarray:
        _, m2, p = self.dims
        w = np.einsum('ajb,bp->jpa', self.bcore, self.c)
        return w.reshape(m2 * p, self.ranks[0], order='F')

    def expand(self) -> GmpModel:
        return GmpModel(s=np.einsum('ia,ajb,bp->ijp', self.a, self.bcore, self.c))

    def factors(self) -> Dict[str, np.ndarray]:
        return {'a': self.a, 'bcore': self.bcore, 'c': self.c}
