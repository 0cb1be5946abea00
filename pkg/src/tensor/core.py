"""
Dense tensor arithmetic

Storage is first-index-fastest (Fortran order), i.e. the offset of the
multi-index (i1, ..., id) is i1 + i2*I1 + i3*I1*I2 + ... (0-based). Under
this layout vectorize() is the flat buffer itself and the column order of
every mode-k unfolding matches the reverse lexicographic merge of the
remaining indices.

All public mode indices are 0-based: unfold(t, 0) is the mode-1 unfolding.
"""

from dataclasses import dataclass
from functools import reduce
from typing import Sequence, Tuple, Union

import numpy as np

from ..errors import DimensionError

MAX_ORDER = 6

ArrayLike = Union[np.ndarray, Sequence]


@dataclass(frozen=True, eq=False)
class DenseTensor:
    """Immutable d-way array with an explicit shape and a flat F-ordered buffer"""
    shape: Tuple[int, ...]
    data: np.ndarray

    def __post_init__(self):
        shape = tuple(int(s) for s in self.shape)
        if not 1 <= len(shape) <= MAX_ORDER:
            raise DimensionError(f"Tensor order must be 1..{MAX_ORDER}, got {len(shape)}")
        if any(s <= 0 for s in shape):
            raise DimensionError(f"Tensor dimensions must be positive, got {shape}")
        data = np.asarray(self.data)
        if data.dtype.kind not in 'fc':
            data = data.astype(np.complex128)
        elif data.dtype not in (np.float64, np.complex128):
            data = data.astype(np.complex128 if data.dtype.kind == 'c' else np.float64)
        data = data.reshape(-1)
        if data.size != int(np.prod(shape)):
            raise DimensionError(
                f"Data length {data.size} does not match shape {shape} "
                f"(expected {int(np.prod(shape))})"
            )
        data = data.copy()
        data.flags.writeable = False
        object.__setattr__(self, 'shape', shape)
        object.__setattr__(self, 'data', data)

    @classmethod
    def from_array(cls, array: ArrayLike) -> 'DenseTensor':
        """Wrap an n-d array (any memory order) as a DenseTensor"""
        array = np.asarray(array)
        return cls(shape=array.shape, data=array.ravel(order='F'))

    @property
    def order(self) -> int:
        return len(self.shape)

    @property
    def is_real(self) -> bool:
        return self.data.dtype.kind == 'f'

    @property
    def array(self) -> np.ndarray:
        """Read-only n-d view (no copy)"""
        return self.data.reshape(self.shape, order='F')

    def vectorize(self) -> np.ndarray:
        return self.data

    def norm(self) -> float:
        """Frobenius norm"""
        return float(np.linalg.norm(self.data))

    def offset(self, index: Sequence[int]) -> int:
        """Flat offset of a 0-based multi-index"""
        if len(index) != self.order:
            raise DimensionError(f"Index {tuple(index)} does not match order {self.order}")
        offset, stride = 0, 1
        for i, dim in zip(index, self.shape):
            if not 0 <= i < dim:
                raise DimensionError(f"Index {tuple(index)} out of range for shape {self.shape}")
            offset += i * stride
            stride *= dim
        return offset

    def __getitem__(self, index) -> complex:
        return self.data[self.offset(index)]


def as_array(t: Union[DenseTensor, ArrayLike]) -> np.ndarray:
    if isinstance(t, DenseTensor):
        return t.array
    return np.asarray(t)


def _check_mode(order: int, k: int) -> None:
    if not 0 <= k < order:
        raise DimensionError(f"Mode {k} out of range for an order-{order} tensor")


def unfold(t: Union[DenseTensor, np.ndarray], k: int) -> np.ndarray:
    """Mode-k unfolding: Ik x prod(other dims), columns are mode-k fibers"""
    array = as_array(t)
    _check_mode(array.ndim, k)
    return np.moveaxis(array, k, 0).reshape(array.shape[k], -1, order='F')


def fold(matrix: np.ndarray, k: int, shape: Sequence[int]) -> DenseTensor:
    """Inverse of unfold for the given full shape"""
    shape = tuple(shape)
    _check_mode(len(shape), k)
    moved = (shape[k],) + shape[:k] + shape[k + 1:]
    matrix = np.asarray(matrix)
    if matrix.size != int(np.prod(shape)) or matrix.shape[0] != shape[k]:
        raise DimensionError(f"Matrix {matrix.shape} cannot fold into {shape} along mode {k}")
    array = np.moveaxis(matrix.reshape(moved, order='F'), 0, k)
    return DenseTensor.from_array(array)


def mode_product(t: Union[DenseTensor, np.ndarray], k: int, q: np.ndarray) -> DenseTensor:
    """Mode-k product t x_k q with q of shape (n, Ik)"""
    array = as_array(t)
    _check_mode(array.ndim, k)
    q = np.asarray(q)
    if q.ndim != 2 or q.shape[1] != array.shape[k]:
        raise DimensionError(
            f"Mode-{k} product needs a matrix with {array.shape[k]} columns, got {q.shape}"
        )
    out = np.tensordot(q, array, axes=(1, k))
    return DenseTensor.from_array(np.moveaxis(out, 0, k))


def mode_vec_product(t: Union[DenseTensor, np.ndarray], k: int, v: np.ndarray) -> DenseTensor:
    """Mode-k product with a vector; drops mode k"""
    array = as_array(t)
    _check_mode(array.ndim, k)
    v = np.asarray(v)
    if v.ndim != 1 or v.shape[0] != array.shape[k]:
        raise DimensionError(f"Mode-{k} vector product needs length {array.shape[k]}, got {v.shape}")
    if array.ndim == 1:
        raise DimensionError("Cannot contract the only mode of an order-1 tensor")
    return DenseTensor.from_array(np.tensordot(array, v, axes=(k, 0)))


def contract_leading(x: Union[DenseTensor, np.ndarray], s: Union[DenseTensor, np.ndarray]) -> np.ndarray:
    """out[n] = sum over trailing indices of x[n, ...] * s[...]"""
    x_arr, s_arr = as_array(x), as_array(s)
    if x_arr.shape[1:] != s_arr.shape:
        raise DimensionError(f"Trailing shape {x_arr.shape[1:]} does not match {s_arr.shape}")
    return unfold(x_arr, 0) @ s_arr.ravel(order='F')


def kron(a: ArrayLike, b: ArrayLike) -> np.ndarray:
    return np.kron(np.asarray(a), np.asarray(b))


def khatri_rao(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Column-wise Kronecker product: column r is kron(a[:, r], b[:, r])"""
    a, b = np.asarray(a), np.asarray(b)
    if a.shape[1] != b.shape[1]:
        raise DimensionError(f"Khatri-Rao needs equal column counts, got {a.shape} and {b.shape}")
    return (a[:, None, :] * b[None, :, :]).reshape(a.shape[0] * b.shape[0], a.shape[1])


def hadamard(a: ArrayLike, b: ArrayLike) -> np.ndarray:
    a, b = np.asarray(a), np.asarray(b)
    if a.shape != b.shape:
        raise DimensionError(f"Hadamard product needs equal shapes, got {a.shape} and {b.shape}")
    return a * b


def outer(*vectors: ArrayLike) -> DenseTensor:
    """outer(v1, ..., vd)[i1, ..., id] = prod_k v_k[i_k]"""
    if not vectors:
        raise DimensionError("outer() needs at least one vector")
    arrays = [np.asarray(v).reshape(-1) for v in vectors]
    return DenseTensor.from_array(reduce(np.multiply.outer, arrays))
