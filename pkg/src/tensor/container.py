"""
Binary tensor container (.gmpt)

Layout (all little-endian):
    4 bytes   magic b"GMPT"
    u64       order d
    d x u64   shape I1..Id
    data      prod(I) complex values as interleaved (re, im) float64, phi order

Real tensors are written with zero imaginary parts; load(..., real=True)
drops them again (and refuses if any are nonzero).
"""

import struct
from pathlib import Path
from typing import Tuple, Union

import numpy as np

from ..errors import ContainerError
from .core import MAX_ORDER, DenseTensor

MAGIC = b"GMPT"
SUFFIX = ".gmpt"

_U64 = struct.Struct("<Q")


def to_bytes(t: DenseTensor) -> bytes:
    """Serialize one tensor to the container byte format"""
    header = MAGIC + _U64.pack(t.order) + b"".join(_U64.pack(s) for s in t.shape)
    payload = np.ascontiguousarray(t.data, dtype="<c16").tobytes()
    return header + payload


def from_bytes(buf: bytes, offset: int = 0, real: bool = False) -> Tuple[DenseTensor, int]:
    """
    Parse one tensor starting at `offset`.

    Returns the tensor and the offset just past it, so several containers
    can be concatenated in one payload.
    """
    view = memoryview(buf)
    if bytes(view[offset:offset + 4]) != MAGIC:
        raise ContainerError(f"Bad magic at byte {offset}: not a tensor container")
    pos = offset + 4
    if len(view) < pos + 8:
        raise ContainerError("Truncated container header")
    (order,) = _U64.unpack_from(view, pos)
    pos += 8
    if not 1 <= order <= MAX_ORDER:
        raise ContainerError(f"Unsupported tensor order {order}")
    if len(view) < pos + 8 * order:
        raise ContainerError("Truncated container shape")
    shape = tuple(_U64.unpack_from(view, pos + 8 * k)[0] for k in range(order))
    pos += 8 * order

    count = int(np.prod(shape))
    nbytes = 16 * count
    if len(view) < pos + nbytes:
        raise ContainerError(
            f"Truncated container data: need {nbytes} bytes for shape {shape}, "
            f"have {len(view) - pos}"
        )
    data = np.frombuffer(view[pos:pos + nbytes], dtype="<c16").astype(np.complex128)
    pos += nbytes

    if real:
        if np.any(data.imag != 0):
            raise ContainerError("Container holds complex data but a real tensor was requested")
        data = data.real.copy()
    return DenseTensor(shape=shape, data=data), pos


def save(t: DenseTensor, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(to_bytes(t))
    return path


def load(path: Union[str, Path], real: bool = False) -> DenseTensor:
    """Read a single-tensor container file"""
    path = Path(path)
    buf = path.read_bytes()
    t, end = from_bytes(buf, 0, real=real)
    if end != len(buf):
        raise ContainerError(f"{path}: {len(buf) - end} trailing bytes after tensor data")
    return t
