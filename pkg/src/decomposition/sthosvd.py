"""
Randomized sequentially truncated HOSVD

For each mode k in turn:
    1. Gaussian sketch G (Ik x (Rk + K))
    2. powered range sketch (X(k) X(k)^H)^q G, re-orthonormalized by QR
       between every multiplication by X(k) or X(k)^H
    3. rank-order the sketch basis by the SVD of Q^H X(k), keep Rk columns
    4. shrink the working tensor: X <- X x_k Qk^H

Complex inputs use conjugate transposes throughout; real inputs stay real.
"""

import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg as la

from ..errors import DimensionError, require_finite
from ..tensor import DenseTensor, as_array, mode_product, unfold

logger = logging.getLogger(__name__)

DEFAULT_OVERSAMPLE = 5
DEFAULT_POWER = 2
ORTHO_TOL = 1e-8


def _gaussian(rng: np.random.Generator, shape: Tuple[int, int], complex_: bool) -> np.ndarray:
    if complex_:
        return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)
    return rng.standard_normal(shape)


def _orth(mat: np.ndarray) -> np.ndarray:
    return la.qr(mat, mode='economic')[0]


def _orthogonality_loss(q: np.ndarray) -> float:
    return float(np.linalg.norm(q.conj().T @ q - np.eye(q.shape[1])))


def sketch_basis(
    unfolded: np.ndarray,
    rank: int,
    oversample: int,
    power: int,
    rng: np.random.Generator,
) -> np.ndarray:
    """
    Orthonormal Ik x rank basis approximating the dominant column space
    of one unfolding.
    """
    rows = unfolded.shape[0]
    complex_ = np.iscomplexobj(unfolded)
    width = min(rank + oversample, rows)

    y = _gaussian(rng, (rows, width), complex_)
    y = _orth(y)
    for _ in range(power):
        y = _orth(unfolded.conj().T @ y)
        y = _orth(unfolded @ y)

    if y.shape[1] < rank:
        # unfolding narrower than the target rank; complete the basis
        extra = _gaussian(rng, (rows, rank - y.shape[1]), complex_)
        y = _orth(np.hstack([y, extra]))

    # rank-order the sketch basis before truncating
    small = y.conj().T @ unfolded
    u_small = la.svd(small, full_matrices=False)[0]
    q = y @ u_small[:, :rank]
    if q.shape[1] < rank:
        q = _orth(np.hstack([q, _gaussian(rng, (rows, rank - q.shape[1]), complex_)]))

    if _orthogonality_loss(q) > ORTHO_TOL:
        q = _orth(q)
    return q


def _validate(shape: Sequence[int], ranks: Sequence[int], oversample: int, power: int) -> None:
    if len(ranks) != len(shape):
        raise DimensionError(f"Got {len(ranks)} ranks for an order-{len(shape)} tensor")
    for k, (r, dim) in enumerate(zip(ranks, shape)):
        if not 1 <= r <= dim:
            raise DimensionError(f"Rank {r} on mode {k} must lie in 1..{dim}")
    if oversample < 0:
        raise ValueError(f"oversample must be >= 0, got {oversample}")
    if power < 1:
        raise ValueError(f"power must be >= 1, got {power}")


def randomized_sthosvd(
    x: DenseTensor,
    ranks: Sequence[int],
    oversample: int = DEFAULT_OVERSAMPLE,
    power: int = DEFAULT_POWER,
    seed: Optional[int] = None,
) -> Tuple[DenseTensor, List[np.ndarray]]:
    """
    Truncate every mode of `x` to the given multilinear ranks.

    Returns (core, factors) with x ~ core x_1 Q1 x_2 ... x_d Qd. Each mode
    draws its sketch from its own child of SeedSequence(seed).
    """
    array = as_array(x)
    _validate(array.shape, ranks, oversample, power)
    require_finite(array, "randomized_sthosvd input")

    children = np.random.SeedSequence(seed).spawn(array.ndim)
    core = array
    factors = []
    for k, rank in enumerate(ranks):
        rng = np.random.default_rng(children[k])
        q = sketch_basis(unfold(core, k), rank, oversample, power, rng)
        factors.append(q)
        core = mode_product(core, k, q.conj().T).array
        logger.debug("mode %d truncated to rank %d (core shape %s)", k, rank, core.shape)

    return DenseTensor.from_array(core), factors


def reconstruct(core: DenseTensor, factors: Sequence[np.ndarray]) -> DenseTensor:
    """core x_1 Q1 x_2 ... x_d Qd"""
    out = core
    for k, q in enumerate(factors):
        out = mode_product(out, k, q)
    return out
