"""
GMP-Tucker model: S = G x1 A x2 B x3 C
"""

from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np

from ..errors import DimensionError
from ..tensor import kron, unfold
from .base import SeparableModel, frozen
from .gmp import GmpModel


@dataclass(frozen=True, eq=False)
class TuckerModel(SeparableModel):
    g: np.ndarray   # R1 x R2 x R3
    a: np.ndarray   # M1 x R1
    b: np.ndarray   # M2 x R2
    c: np.ndarray   # P x R3
    kind = 'tucker'

    def __post_init__(self):
        object.__setattr__(self, 'g', frozen(self.g, 'g', 3))
        for name in ('a', 'b', 'c'):
            object.__setattr__(self, name, frozen(getattr(self, name), name, 2))
        expected = (self.a.shape[1], self.b.shape[1], self.c.shape[1])
        if self.g.shape != expected:
            raise DimensionError(f"Tucker core shape {self.g.shape} does not match factor ranks {expected}")

    @property
    def dims(self) -> Tuple[int, int, int]:
        return self.a.shape[0], self.b.shape[0], self.c.shape[0]

    @property
    def ranks(self) -> Tuple[int, int, int]:
        return self.g.shape

    def mode23_weights(self) -> np.ndarray:
        return kron(self.c, self.b) @ unfold(self.g, 0).T

    def expand(self) -> GmpModel:
        return GmpModel(s=np.einsum('abc,ia,jb,pc->ijp', self.g, self.a, self.b, self.c))

    def factors(self) -> Dict[str, np.ndarray]:
        return {'g': self.g, 'a': self.a, 'b': self.b, 'c': self.c}
