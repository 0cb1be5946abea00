"""
Gray-mapped 16-QAM

Each group of four bits b0 b1 b2 b3 maps to one symbol: (b0, b1) picks the
in-phase level and (b2, b3) the quadrature level, both through the Gray axis
map 00 -> -3, 01 -> -1, 11 -> +1, 10 -> +3. The constellation is divided by
sqrt(10) so the average symbol power is 1.
"""

import numpy as np

BITS_PER_SYMBOL = 4

# index 2*b_hi + b_lo -> level
_AXIS_LEVELS = np.array([-3.0, -1.0, 3.0, 1.0])
_SCALE = 1.0 / np.sqrt(10.0)


def qam16_map(bits) -> np.ndarray:
    """Map a 0/1 bit array (length divisible by 4) to unit-power 16-QAM symbols"""
    bits = np.asarray(bits).reshape(-1)
    if bits.size % BITS_PER_SYMBOL != 0:
        raise ValueError(f"16-QAM needs a multiple of 4 bits, got {bits.size}")
    if bits.size and not np.all((bits == 0) | (bits == 1)):
        raise ValueError("Bit array may only contain 0 and 1")

    groups = bits.astype(np.int64).reshape(-1, BITS_PER_SYMBOL)
    in_phase = _AXIS_LEVELS[2 * groups[:, 0] + groups[:, 1]]
    quadrature = _AXIS_LEVELS[2 * groups[:, 2] + groups[:, 3]]
    return (in_phase + 1j * quadrature) * _SCALE
