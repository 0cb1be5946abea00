"""
Mode-2/3 projections of the envelope basis tensor

Only the delay (j) and power (p) modes of M (N x M2 x P) are truncated; the
time mode stays intact. The projected core and its two orthonormal factors
feed the randomized-projection ALS solvers.
"""

import json
import logging
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Tuple, Union

import numpy as np
import scipy.linalg as la

from ..errors import ContainerError, DimensionError, require_finite
from ..tensor import DenseTensor, as_array, container, mode_product, unfold
from .sthosvd import DEFAULT_OVERSAMPLE, DEFAULT_POWER, sketch_basis

logger = logging.getLogger(__name__)

MAGIC = b"GMPP"
SUFFIX = ".gmpp"

_U64 = struct.Struct("<Q")


@dataclass(frozen=True, eq=False)
class ProjectionPair:
    """Orthonormal mode-2/3 factors plus the projected core"""
    u2: np.ndarray           # M2 x M2~
    u3: np.ndarray           # P x P~
    core: DenseTensor        # N x M2~ x P~
    approx_error: float      # ||M - core x2 u2 x3 u3||_F
    seed: Optional[int] = None

    @property
    def target(self) -> Tuple[int, int]:
        return self.u2.shape[1], self.u3.shape[1]

    @property
    def dims(self) -> Tuple[int, int]:
        return self.u2.shape[0], self.u3.shape[0]

    def reconstruct(self) -> DenseTensor:
        """M-hat = core x2 u2 x3 u3 (original dimensions)"""
        return mode_product(mode_product(self.core, 1, self.u2), 2, self.u3)

    def relative_error(self, m: DenseTensor) -> float:
        norm = np.linalg.norm(as_array(m))
        return self.approx_error / norm if norm > 0 else 0.0


def _check_target(m: np.ndarray, target: Tuple[int, int]) -> None:
    if m.ndim != 3:
        raise DimensionError(f"Basis tensor must be N x M2 x P, got shape {m.shape}")
    m2t, pt = target
    if not 1 <= m2t <= m.shape[1]:
        raise DimensionError(f"Projected delay rank {m2t} must lie in 1..{m.shape[1]}")
    if not 1 <= pt <= m.shape[2]:
        raise DimensionError(f"Projected power rank {pt} must lie in 1..{m.shape[2]}")
    if np.iscomplexobj(m) and np.any(np.imag(m) != 0):
        raise ValueError("Mode-2/3 projection expects a real basis tensor")


def _finish(m: np.ndarray, u2: np.ndarray, u3: np.ndarray, seed: Optional[int]) -> ProjectionPair:
    core = mode_product(mode_product(m, 1, u2.T), 2, u3.T)
    m_hat = mode_product(mode_product(core, 1, u2), 2, u3).array
    error = float(np.linalg.norm(m - m_hat))
    return ProjectionPair(u2=u2, u3=u3, core=core, approx_error=error, seed=seed)


def project_modes_23(
    m: DenseTensor,
    target: Tuple[int, int],
    oversample: int = DEFAULT_OVERSAMPLE,
    power: int = DEFAULT_POWER,
    seed: Optional[int] = None,
) -> ProjectionPair:
    """Randomized truncated HOSVD restricted to modes 2 and 3 (0-based 1 and 2)"""
    array = np.real(as_array(m)) if np.iscomplexobj(as_array(m)) else as_array(m)
    _check_target(as_array(m), target)
    require_finite(array, "basis tensor")
    if oversample < 0 or power < 1:
        raise ValueError(f"Need oversample >= 0 and power >= 1, got {oversample}, {power}")

    children = np.random.SeedSequence(seed).spawn(3)
    u2 = sketch_basis(unfold(array, 1), target[0], oversample, power,
                      np.random.default_rng(children[1]))
    shrunk = mode_product(array, 1, u2.T).array
    u3 = sketch_basis(unfold(shrunk, 2), target[1], oversample, power,
                      np.random.default_rng(children[2]))

    pair = _finish(array, u2, u3, seed)
    logger.info(
        "projected basis %s -> %s, relative error %.3e",
        array.shape, pair.core.shape, pair.relative_error(array),
    )
    return pair


def exact_project_modes_23(m: DenseTensor, target: Tuple[int, int]) -> ProjectionPair:
    """Deterministic SVD-based truncation of modes 2 and 3 (sequential)"""
    array = np.real(as_array(m)) if np.iscomplexobj(as_array(m)) else as_array(m)
    _check_target(as_array(m), target)
    require_finite(array, "basis tensor")

    u2 = la.svd(unfold(array, 1), full_matrices=False)[0][:, :target[0]]
    shrunk = mode_product(array, 1, u2.T).array
    u3 = la.svd(unfold(shrunk, 2), full_matrices=False)[0][:, :target[1]]
    return _finish(array, u2, u3, None)


def save_projection(pair: ProjectionPair, path: Union[str, Path]) -> Path:
    """Write header JSON plus three tensor containers (u2, u3, core)"""
    header = json.dumps({
        'target': list(pair.target),
        'dims': list(pair.dims),
        'seed': pair.seed,
        'approx_error': pair.approx_error,
    }, sort_keys=True).encode('utf-8')
    payload = b"".join(
        container.to_bytes(DenseTensor.from_array(a))
        for a in (pair.u2, pair.u3, pair.core.array)
    )
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(MAGIC + _U64.pack(len(header)) + header + payload)
    return path


def load_projection(path: Union[str, Path]) -> ProjectionPair:
    buf = Path(path).read_bytes()
    if buf[:4] != MAGIC:
        raise ContainerError(f"{path}: not a projection file")
    (length,) = _U64.unpack_from(buf, 4)
    start = 12 + length
    try:
        header = json.loads(buf[12:start].decode('utf-8'))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise ContainerError(f"{path}: unreadable projection header ({e})") from e

    u2, pos = container.from_bytes(buf, start, real=True)
    u3, pos = container.from_bytes(buf, pos, real=True)
    core, pos = container.from_bytes(buf, pos, real=True)
    if pos != len(buf):
        raise ContainerError(f"{path}: trailing bytes after projection payload")
    return ProjectionPair(
        u2=u2.array.copy(), u3=u3.array.copy(), core=core,
        approx_error=float(header['approx_error']), seed=header.get('seed'),
    )
