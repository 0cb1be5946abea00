"""
Signal Lab

OFDM/16-QAM source, reference PA with memory and AWGN, signal file I/O.
"""

from .qam import qam16_map
from .ofdm import OfdmConfig, modulate_symbols, ofdm_generate, subcarrier_bins
from .amplifier import (
    ReferencePa,
    measure_snr_db,
    reference_coefficients,
    reference_pa_apply,
)
from .files import SIGNAL_FORMATS, load_signal, save_signal

__all__ = [
    'qam16_map',
    'OfdmConfig',
    'modulate_symbols',
    'ofdm_generate',
    'subcarrier_bins',
    'ReferencePa',
    'measure_snr_db',
    'reference_coefficients',
    'reference_pa_apply',
    'SIGNAL_FORMATS',
    'load_signal',
    'save_signal',
]
