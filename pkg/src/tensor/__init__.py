"""
Tensor Core

Dense tensors in first-index-fastest layout, unfoldings, mode products and
the binary container used for every tensor-valued file.
"""

from .core import (
    MAX_ORDER,
    DenseTensor,
    as_array,
    contract_leading,
    fold,
    hadamard,
    khatri_rao,
    kron,
    mode_product,
    mode_vec_product,
    outer,
    unfold,
)
from . import container

__all__ = [
    'MAX_ORDER',
    'DenseTensor',
    'as_array',
    'contract_leading',
    'fold',
    'hadamard',
    'khatri_rao',
    'kron',
    'mode_product',
    'mode_vec_product',
    'outer',
    'unfold',
    'container',
]
