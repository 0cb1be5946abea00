"""
Shared fixtures: small random signals for fast suites, protocol-size
planted-truth data (session scoped) for the slow ones.
"""

import numpy as np
import pytest

from src.config import ExperimentConfig
from src.dataset import build_design
from src.metrics.compare import ExperimentData
from src.signals import ReferencePa


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_signal(rng, n, rms=0.3):
    return rms * (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / np.sqrt(2)


@pytest.fixture
def small_signals(rng):
    """(x, y): 600 complex Gaussian samples through a short noiseless PA"""
    x = random_signal(rng, 600)
    y = ReferencePa(memory_depth=3, order=3, snr_db=None).apply(x)
    return x, y


@pytest.fixture
def small_design(small_signals):
    """Design set with dims (4, 3, 3), N = 200"""
    x, y = small_signals
    return build_design(x, y, t0=10, n=200, m1=4, m2=3, p=3)


@pytest.fixture(scope='session')
def protocol_config():
    """Default protocol: 2048-point OFDM, depth-11 order-5 PA at 50 dB SNR"""
    cfg = ExperimentConfig(seed=2024)
    cfg.validate()
    return cfg


@pytest.fixture(scope='session')
def protocol_data(protocol_config):
    return ExperimentData.generate(protocol_config)
