"""
Reference power amplifier

A memory-polynomial PA

    y(t) = sum_{m<D} sum_{p<Q} c[m, p] * x(t-m) * |x(t-m)|**p  +  AWGN

with zero-padded history before t = 0. The shipped coefficient table
(D = 11, Q = 5) has:

- lag 0: a compressive static nonlinearity g (gain ~0.66 at |x| = 1)
- lags 1..10: linear taps decaying roughly by half per lag
- lag 1: a weak copy of the nonlinearity (1% of g for p >= 1)

Every term lies inside a GMP with M1 = M2 = D and P = Q, and the planted
coefficient tensor (to_gmp_tensor) has CP rank 3.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..errors import DimensionError, require_finite

logger = logging.getLogger(__name__)

# lag-0 nonlinearity, p = 0..4
STATIC_NONLINEARITY = np.array([
    1.0,
    -0.08 + 0.03j,
    -0.35 + 0.12j,
    0.10 - 0.04j,
    -0.02 + 0.01j,
])

# linear taps for lags 1..10
MEMORY_TAPS = np.array([
    0.120 - 0.050j,
    -0.060 + 0.030j,
    0.030 - 0.012j,
    -0.015 + 0.006j,
    0.008 - 0.003j,
    -0.004 + 0.0015j,
    0.002 - 0.0008j,
    -0.001 + 0.0004j,
    0.0005 - 0.0002j,
    -0.00025 + 0.0001j,
])

LAG1_NONLINEAR_SCALE = 0.01


def reference_coefficients(memory_depth: int = 11, order: int = 5) -> np.ndarray:
    """
    Shipped memory_depth x order coefficient table.

    Depths or orders beyond the table are zero-padded; smaller ones truncate.
    """
    if memory_depth < 1 or order < 1:
        raise DimensionError(f"memory_depth and order must be >= 1, got {memory_depth}, {order}")
    table = np.zeros((11, 5), dtype=np.complex128)
    table[0, :] = STATIC_NONLINEARITY
    table[1:, 0] = MEMORY_TAPS
    table[1, 1:] = LAG1_NONLINEAR_SCALE * STATIC_NONLINEARITY[1:]

    coeffs = np.zeros((memory_depth, order), dtype=np.complex128)
    rows, cols = min(memory_depth, 11), min(order, 5)
    coeffs[:rows, :cols] = table[:rows, :cols]
    return coeffs


def measure_snr_db(clean: np.ndarray, noisy: np.ndarray) -> float:
    """10*log10(clean power / power of (noisy - clean))"""
    clean, noisy = np.asarray(clean), np.asarray(noisy)
    noise_power = np.mean(np.abs(noisy - clean) ** 2)
    if noise_power == 0:
        return float('inf')
    return float(10 * np.log10(np.mean(np.abs(clean) ** 2) / noise_power))


@dataclass(frozen=True, eq=False)
class ReferencePa:
    memory_depth: int = 11
    coeffs: Optional[np.ndarray] = None     # memory_depth x order
    snr_db: Optional[float] = 50.0          # None or inf: noiseless
    order: int = 5

    def __post_init__(self):
        if self.coeffs is None:
            coeffs = reference_coefficients(self.memory_depth, self.order)
        else:
            coeffs = np.array(self.coeffs, dtype=np.complex128)
            if coeffs.ndim != 2:
                raise DimensionError(f"PA coefficients must be a 2-D table, got shape {coeffs.shape}")
            if coeffs.shape[0] != self.memory_depth:
                raise DimensionError(
                    f"Coefficient table has {coeffs.shape[0]} lags but memory_depth is {self.memory_depth}"
                )
            object.__setattr__(self, 'order', coeffs.shape[1])
        if self.memory_depth < 1:
            raise DimensionError(f"memory_depth must be >= 1, got {self.memory_depth}")
        require_finite(coeffs, "PA coefficients")
        coeffs.flags.writeable = False
        object.__setattr__(self, 'coeffs', coeffs)

    @property
    def noiseless(self) -> bool:
        return self.snr_db is None or np.isinf(self.snr_db)

    def apply_clean(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.complex128).reshape(-1)
        if x.size == 0:
            raise DimensionError("Cannot amplify an empty signal")
        if x.size <= self.memory_depth:
            raise DimensionError(
                f"Signal length {x.size} must exceed the PA memory depth {self.memory_depth}"
            )
        require_finite(x, "PA input")

        envelope = np.abs(x)
        # branches[t, p] = x(t) |x(t)|^p ; per_lag[t, m] = sum_p c[m, p] branches[t, p]
        branches = x[:, None] * envelope[:, None] ** np.arange(self.order)
        per_lag = branches @ self.coeffs.T

        y = per_lag[:, 0].copy()
        for m in range(1, self.memory_depth):
            y[m:] += per_lag[:-m, m]
        return y

    def apply(self, x: np.ndarray, seed: Optional[int] = None) -> np.ndarray:
        """Clean PA output plus complex AWGN at snr_db (output-referred)"""
        y = self.apply_clean(x)
        if self.noiseless:
            return y
        rng = np.random.default_rng(seed)
        noise_power = np.mean(np.abs(y) ** 2) / 10 ** (self.snr_db / 10)
        noise = np.sqrt(noise_power / 2) * (
            rng.standard_normal(y.size) + 1j * rng.standard_normal(y.size)
        )
        logger.debug("added AWGN at %.1f dB SNR (noise power %.3e)", self.snr_db, noise_power)
        return y + noise

    def gain(self, r) -> np.ndarray:
        """Complex steady-state gain for a constant envelope of modulus r"""
        r = np.asarray(r, dtype=float)
        lag_sum = self.coeffs.sum(axis=0)
        return np.polynomial.polynomial.polyval(r, lag_sum)

    def am_am(self, r) -> np.ndarray:
        """Output modulus for a constant-envelope input of modulus r"""
        r = np.asarray(r, dtype=float)
        return np.abs(self.gain(r)) * r

    def to_gmp_tensor(self, m1: int, m2: int, p: int) -> np.ndarray:
        """
        Planted GMP coefficient tensor S (m1 x m2 x p).

        c[m, q] lands on S[m, m, q] for q >= 1 and on S[m, 0, 0] for q = 0
        (|x|^0 = 1 makes the envelope delay irrelevant there).
        """
        s = np.zeros((m1, m2, p), dtype=np.complex128)
        for m in range(self.memory_depth):
            for q in range(self.order):
                c = self.coeffs[m, q]
                if c == 0:
                    continue
                j = 0 if q == 0 else m
                if m >= m1 or j >= m2 or q >= p:
                    raise DimensionError(
                        f"PA term (lag {m}, power {q}) does not fit a GMP of dims ({m1}, {m2}, {p})"
                    )
                s[m, j, q] += c
        return s


def reference_pa_apply(x: np.ndarray, pa: ReferencePa, seed: Optional[int] = None) -> np.ndarray:
    return pa.apply(x, seed=seed)
