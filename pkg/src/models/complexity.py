"""
Parameter counts and running complexity

FLOP accounting per output sample: real add/mul = 1, complex add or
complex-real mul = 2, complex-complex mul = 6, modulus = 10.

| Model  | Parameters                     | FLOPs                                    |
|--------|--------------------------------|------------------------------------------|
| gmp    | M1 M2 P                        | 8 M1 M2 P + 2 (P-1)(M1+M2-1) + 8         |
| cp     | R (M1 + M2 + P)                | R (10 M2 P + 8 M1 + 4) + P + 6           |
| tt     | R1 M1 + R1 R2 M2 + R2 P        | R1 (10 R2 M2 P + 8 M1 + 4) + P + 6       |
| tucker | R1 R2 R3 + M1R1 + M2R2 + PR3   | R1 (R2 R3 (10 M2 P + 6) + 8 M1 + 4) + P + 6 |
"""

from typing import Sequence, Tuple

from ..errors import DimensionError

RANK_COUNTS = {'gmp': 0, 'cp': 1, 'tt': 2, 'tucker': 3}


def _check(kind: str, dims: Sequence[int], ranks: Sequence[int]) -> Tuple[Tuple[int, int, int], Tuple[int, ...]]:
    if kind not in RANK_COUNTS:
        raise ValueError(f"Unknown model kind: '{kind}'. Available: {', '.join(RANK_COUNTS)}")
    dims = tuple(int(d) for d in dims)
    ranks = tuple(int(r) for r in (ranks or ()))
    if len(dims) != 3 or min(dims) < 1:
        raise DimensionError(f"dims must be three positive integers, got {dims}")
    if len(ranks) != RANK_COUNTS[kind]:
        raise DimensionError(f"{kind} takes {RANK_COUNTS[kind]} rank(s), got {ranks}")
    if ranks and min(ranks) < 0:
        raise DimensionError(f"ranks must be non-negative, got {ranks}")
    return dims, ranks


def check_ranks(kind: str, dims: Sequence[int], ranks: Sequence[int]) -> None:
    """Ranks a model can be built with: right count, all positive"""
    _, ranks = _check(kind, dims, ranks)
    if ranks and min(ranks) < 1:
        raise DimensionError(f"ranks must be positive, got {ranks}")


def param_count(kind: str, dims: Sequence[int], ranks: Sequence[int] = ()) -> int:
    (m1, m2, p), ranks = _check(kind, dims, ranks)
    if kind == 'gmp':
        return m1 * m2 * p
    if kind == 'cp':
        (r,) = ranks
        return r * (m1 + m2 + p)
    if kind == 'tt':
        r1, r2 = ranks
        return r1 * m1 + r1 * r2 * m2 + r2 * p
    r1, r2, r3 = ranks
    return r1 * r2 * r3 + m1 * r1 + m2 * r2 + p * r3


def flop_count(kind: str, dims: Sequence[int], ranks: Sequence[int] = ()) -> int:
    (m1, m2, p), ranks = _check(kind, dims, ranks)
    if kind == 'gmp':
        return 8 * m1 * m2 * p + 2 * (p - 1) * (m1 + m2 - 1) + 8
    if kind == 'cp':
        (r,) = ranks
        return r * (10 * m2 * p + 8 * m1 + 4) + p + 6
    if kind == 'tt':
        r1, r2 = ranks
        return r1 * (10 * r2 * m2 * p + 8 * m1 + 4) + p + 6
    r1, r2, r3 = ranks
    return r1 * (r2 * r3 * (10 * m2 * p + 6) + 8 * m1 + 4) + p + 6
