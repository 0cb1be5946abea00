"""
Identification inputs built from an input/output signal pair

For a window starting at t0 with N rows (0-based sample indices):

    y[n]       = y_sig(t0 + n)
    h[n, i]    = x(t0 + n - i)                  i < M1
    m[n, j, p] = |x(t0 + n - j)| ** p           j < M2, p < P

so the full GMP regressor factorizes as X[n, i, j, p] = h[n, i] * m[n, j, p].
"""

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Tuple, Union

import numpy as np

from ..errors import ContainerError, DimensionError, require_finite
from ..tensor import DenseTensor, container, unfold

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class DesignSet:
    y: np.ndarray            # N
    h: np.ndarray            # N x M1
    m: DenseTensor           # N x M2 x P, real
    t0: int = 0
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        y = np.asarray(self.y, dtype=np.complex128).reshape(-1)
        h = np.asarray(self.h, dtype=np.complex128)
        m = self.m if isinstance(self.m, DenseTensor) else DenseTensor.from_array(self.m)
        if h.ndim != 2 or m.order != 3:
            raise DimensionError(f"Expected h N x M1 and m N x M2 x P, got {h.shape} and {m.shape}")
        if not (y.size == h.shape[0] == m.shape[0]):
            raise DimensionError(
                f"Row counts disagree: y {y.size}, h {h.shape[0]}, m {m.shape[0]}"
            )
        y.flags.writeable = False
        h.flags.writeable = False
        object.__setattr__(self, 'y', y)
        object.__setattr__(self, 'h', h)
        object.__setattr__(self, 'm', m)

    @property
    def n(self) -> int:
        return self.y.size

    @property
    def dims(self) -> Tuple[int, int, int]:
        """(M1, M2, P)"""
        return self.h.shape[1], self.m.shape[1], self.m.shape[2]

    def basis_matrix(self) -> np.ndarray:
        """N x (M2*P) mode-1 unfolding of m (column j + p*M2)"""
        return unfold(self.m, 0)

    def full_tensor(self) -> DenseTensor:
        """X[n, i, j, p] = h[n, i] * m[n, j, p]"""
        return DenseTensor.from_array(self.h[:, :, None, None] * self.m.array[:, None, :, :])

    def with_basis(self, m: DenseTensor) -> 'DesignSet':
        """Same y and h with a replacement basis tensor (e.g. a projected core)"""
        return DesignSet(y=self.y, h=self.h, m=m, t0=self.t0, meta=dict(self.meta))

    def describe(self) -> dict:
        m1, m2, p = self.dims
        return {'t0': self.t0, 'N': self.n, 'M1': m1, 'M2': m2, 'P': p}


def _window_indices(length: int, t0: int, n: int, m1: int, m2: int, p: int) -> np.ndarray:
    if n <= 0:
        raise DimensionError(f"Window length N must be positive, got {n}")
    if min(m1, m2, p) < 1:
        raise DimensionError(f"GMP dims must be >= 1, got ({m1}, {m2}, {p})")
    lag = max(m1, m2) - 1
    if t0 < lag:
        raise DimensionError(f"t0={t0} must be at least max(M1, M2) - 1 = {lag}")
    if t0 + n > length:
        raise DimensionError(
            f"Window [{t0}, {t0 + n - 1}] exceeds the signal length {length}"
        )
    return t0 + np.arange(n)


def _regressors(x: np.ndarray, idx: np.ndarray, m1: int, m2: int, p: int):
    h = x[idx[:, None] - np.arange(m1)]
    envelope = np.abs(x[idx[:, None] - np.arange(m2)])
    # 0 ** 0 == 1 keeps the p = 0 slice all ones
    m = np.power(envelope[:, :, None], np.arange(p))
    return h, m


def build_design(x, y_sig, t0: int, n: int, m1: int, m2: int, p: int) -> DesignSet:
    x = np.asarray(x, dtype=np.complex128).reshape(-1)
    y_sig = np.asarray(y_sig, dtype=np.complex128).reshape(-1)
    idx = _window_indices(min(x.size, y_sig.size), t0, n, m1, m2, p)
    require_finite(x, "input signal")
    require_finite(y_sig, "output signal")

    h, m = _regressors(x, idx, m1, m2, p)
    design = DesignSet(y=y_sig[idx], h=h, m=DenseTensor.from_array(m), t0=t0)
    logger.debug("design window t0=%d N=%d dims=%s", t0, n, design.dims)
    return design


def build_full_design(x, t0: int, n: int, m1: int, m2: int, p: int) -> DenseTensor:
    """The N x M1 x M2 x P GMP regressor tensor"""
    x = np.asarray(x, dtype=np.complex128).reshape(-1)
    idx = _window_indices(x.size, t0, n, m1, m2, p)
    h, m = _regressors(x, idx, m1, m2, p)
    return DenseTensor.from_array(h[:, :, None, None] * m[:, None, :, :])


def save_design(design: DesignSet, path: Union[str, Path]) -> Path:
    """Write y, h, m as concatenated containers plus a .json meta sidecar"""
    path = Path(path).with_suffix(container.SUFFIX)
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = b"".join([
        container.to_bytes(DenseTensor.from_array(design.y)),
        container.to_bytes(DenseTensor.from_array(design.h)),
        container.to_bytes(design.m),
    ])
    path.write_bytes(payload)
    meta = {**design.describe(), 'extra': design.meta}
    path.with_suffix('.json').write_text(json.dumps(meta, indent=2, sort_keys=True), encoding='utf-8')
    return path


def load_design(path: Union[str, Path]) -> DesignSet:
    path = Path(path).with_suffix(container.SUFFIX)
    buf = path.read_bytes()
    y, pos = container.from_bytes(buf, 0)
    h, pos = container.from_bytes(buf, pos)
    m, pos = container.from_bytes(buf, pos, real=True)
    if pos != len(buf):
        raise ContainerError(f"{path}: trailing bytes after design payload")
    meta = json.loads(path.with_suffix('.json').read_text(encoding='utf-8'))
    design = DesignSet(y=y.data, h=h.array, m=m, t0=int(meta['t0']), meta=meta.get('extra', {}))
    if design.describe() != {k: meta[k] for k in ('t0', 'N', 'M1', 'M2', 'P')}:
        raise ContainerError(f"{path}: sidecar metadata does not match the stored tensors")
    return design
