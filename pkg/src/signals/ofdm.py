"""
OFDM baseband source

Random bits -> 16-QAM on the active subcarriers (split around an unused DC
bin) -> unitary inverse FFT -> cyclic prefix, repeated per OFDM symbol.
"""

import logging
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from ..errors import ConfigError
from .qam import BITS_PER_SYMBOL, qam16_map

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class OfdmConfig:
    """OFDM source settings; modulation is always 16-QAM"""
    fft_len: int = 2048
    active_subcarriers: int = 1584
    cyclic_prefix_len: int = 72
    num_symbols: int = 28
    rms: float = 0.3
    seed: Optional[int] = None

    def validate(self) -> None:
        for name in ('fft_len', 'active_subcarriers', 'cyclic_prefix_len', 'num_symbols'):
            value = getattr(self, name)
            if not isinstance(value, (int, np.integer)) or value <= 0:
                raise ConfigError(f"ofdm.{name} must be a positive integer, got {value!r}")
        # DC stays empty
        if self.active_subcarriers > self.fft_len - 1:
            raise ConfigError(
                f"ofdm.active_subcarriers ({self.active_subcarriers}) must be below "
                f"fft_len ({self.fft_len})"
            )
        if self.cyclic_prefix_len > self.fft_len:
            raise ConfigError("ofdm.cyclic_prefix_len cannot exceed fft_len")
        if not self.rms > 0:
            raise ConfigError(f"ofdm.rms must be positive, got {self.rms!r}")

    @property
    def symbol_len(self) -> int:
        return self.fft_len + self.cyclic_prefix_len

    @property
    def signal_len(self) -> int:
        return self.num_symbols * self.symbol_len

    def to_dict(self) -> dict:
        return asdict(self)


def subcarrier_bins(fft_len: int, active: int) -> np.ndarray:
    """FFT bins of the active subcarriers: -a..-1 and 1..b, odd extra on the positive side"""
    negative = active // 2
    positive = active - negative
    bins = np.concatenate([np.arange(-negative, 0), np.arange(1, positive + 1)])
    return np.mod(bins, fft_len)


def modulate_symbols(cfg: OfdmConfig, qam_symbols: np.ndarray) -> np.ndarray:
    """
    Build the time signal from a (num_symbols x active) grid of QAM symbols.

    The unitary IFFT is rescaled so the expected sample power is cfg.rms**2.
    """
    qam_symbols = np.asarray(qam_symbols).reshape(cfg.num_symbols, cfg.active_subcarriers)
    grid = np.zeros((cfg.num_symbols, cfg.fft_len), dtype=np.complex128)
    grid[:, subcarrier_bins(cfg.fft_len, cfg.active_subcarriers)] = qam_symbols

    body = np.fft.ifft(grid, axis=1, norm='ortho')
    body *= cfg.rms * np.sqrt(cfg.fft_len / cfg.active_subcarriers)
    if cfg.cyclic_prefix_len:
        body = np.hstack([body[:, -cfg.cyclic_prefix_len:], body])
    return body.reshape(-1)


def ofdm_generate(cfg: OfdmConfig) -> np.ndarray:
    """Random 16-QAM OFDM baseband signal of length num_symbols * (fft_len + cp)"""
    cfg.validate()
    rng = np.random.default_rng(cfg.seed)
    bits = rng.integers(0, 2, size=cfg.num_symbols * cfg.active_subcarriers * BITS_PER_SYMBOL)
    x = modulate_symbols(cfg, qam16_map(bits))
    logger.debug(
        "generated %d OFDM symbols (%d samples, rms %.4f)",
        cfg.num_symbols, x.size, float(np.sqrt(np.mean(np.abs(x) ** 2))),
    )
    return x
