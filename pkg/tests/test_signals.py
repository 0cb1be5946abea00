"""
Tests for the signal lab: 16-QAM, OFDM source, reference PA and signal files
"""

import itertools

import numpy as np
import pytest

from src.dataset import build_design
from src.errors import ConfigError, ContainerError, DimensionError
from src.models import GmpModel
from src.signals import (
    OfdmConfig,
    ReferencePa,
    load_signal,
    measure_snr_db,
    modulate_symbols,
    ofdm_generate,
    qam16_map,
    reference_coefficients,
    reference_pa_apply,
    save_signal,
    subcarrier_bins,
)


def tiny_ofdm(**overrides):
    settings = dict(fft_len=64, active_subcarriers=48, cyclic_prefix_len=8, num_symbols=3, seed=1)
    settings.update(overrides)
    return OfdmConfig(**settings)


class TestQam16:
    """Test the Gray-mapped 16-QAM constellation"""

    def test_corner_point(self):
        assert qam16_map([0, 0, 0, 0])[0] == pytest.approx((-3 - 3j) / np.sqrt(10))

    def test_gray_axis_levels(self):
        levels = [qam16_map([b0, b1, 0, 0])[0].real * np.sqrt(10) for b0, b1 in [(0, 0), (0, 1), (1, 1), (1, 0)]]
        assert levels == pytest.approx([-3, -1, 1, 3])

    def test_unit_average_power(self):
        bits = np.array(list(itertools.product([0, 1], repeat=4))).reshape(-1)
        symbols = qam16_map(bits)
        assert np.mean(np.abs(symbols) ** 2) == pytest.approx(1.0, abs=1e-15)

    def test_injective(self):
        bits = np.array(list(itertools.product([0, 1], repeat=4))).reshape(-1)
        assert len(set(np.round(qam16_map(bits), 12))) == 16

    def test_bit_count_not_multiple_of_four(self):
        with pytest.raises(ValueError):
            qam16_map([0, 1, 1])

    def test_non_binary_input(self):
        with pytest.raises(ValueError):
            qam16_map([0, 1, 2, 0])


class TestOfdm:
    """Test the OFDM baseband source"""

    def test_default_length(self):
        cfg = OfdmConfig()
        assert cfg.signal_len == 28 * (2048 + 72) == 59360

    def test_generated_length_and_power(self):
        cfg = OfdmConfig(seed=4)
        x = ofdm_generate(cfg)
        assert x.size == 59360
        assert np.sqrt(np.mean(np.abs(x) ** 2)) == pytest.approx(cfg.rms, rel=0.02)

    def test_cyclic_prefix_copies_symbol_tail(self):
        cfg = tiny_ofdm()
        x = ofdm_generate(cfg).reshape(cfg.num_symbols, cfg.symbol_len)
        assert np.array_equal(x[:, :cfg.cyclic_prefix_len], x[:, -cfg.cyclic_prefix_len:])

    def test_active_bins_split_around_dc(self):
        bins = subcarrier_bins(16, 5)
        assert 0 not in bins
        assert sorted(bins.tolist()) == [1, 2, 3, 14, 15]

    def test_inactive_bins_are_empty(self):
        cfg = tiny_ofdm(cyclic_prefix_len=0, num_symbols=1)
        spectrum = np.fft.fft(ofdm_generate(cfg))
        active = np.zeros(cfg.fft_len, dtype=bool)
        active[subcarrier_bins(cfg.fft_len, cfg.active_subcarriers)] = True
        assert np.max(np.abs(spectrum[~active])) < 1e-12
        assert np.min(np.abs(spectrum[active])) > 0

    def test_single_tone_has_constant_modulus(self):
        cfg = tiny_ofdm(active_subcarriers=1, num_symbols=1)
        s = (3 + 1j) / np.sqrt(10)
        x = modulate_symbols(cfg, np.array([s]))
        assert np.allclose(np.abs(x), cfg.rms * abs(s), atol=1e-14)

    def test_fixed_seed_deterministic(self):
        assert np.array_equal(ofdm_generate(tiny_ofdm(seed=9)), ofdm_generate(tiny_ofdm(seed=9)))
        assert not np.array_equal(ofdm_generate(tiny_ofdm(seed=9)), ofdm_generate(tiny_ofdm(seed=10)))

    def test_dc_must_stay_free(self):
        with pytest.raises(ConfigError):
            ofdm_generate(tiny_ofdm(active_subcarriers=64))

    def test_non_positive_counts(self):
        with pytest.raises(ConfigError):
            ofdm_generate(tiny_ofdm(num_symbols=0))


class TestReferencePa:
    """Test the reference memory-polynomial PA"""

    def test_identity_pa(self, rng):
        x = rng.standard_normal(50) + 1j * rng.standard_normal(50)
        pa = ReferencePa(memory_depth=1, coeffs=np.array([[1.0]]), snr_db=None)
        assert np.array_equal(reference_pa_apply(x, pa), x)

    def test_memoryless_cubic_on_constant_envelope(self):
        alpha, r = -0.3 + 0.1j, 0.8
        x = r * np.exp(1j * np.linspace(0, 5, 40))
        pa = ReferencePa(memory_depth=1, coeffs=np.array([[1.0, 0.0, alpha]]), snr_db=None)
        assert np.allclose(np.abs(pa.apply(x)), abs(1 + alpha * r ** 2) * r, atol=1e-14)
        assert pa.am_am(r) == pytest.approx(abs(1 + alpha * r ** 2) * r)

    def test_zero_padded_history(self):
        x = np.zeros(20, dtype=complex)
        x[0] = 1.0
        pa = ReferencePa(memory_depth=3, coeffs=np.array([[1.0], [0.5], [0.25]]), snr_db=None)
        assert np.allclose(pa.apply(x)[:4], [1.0, 0.5, 0.25, 0.0])

    def test_measured_snr(self):
        x = ofdm_generate(OfdmConfig(fft_len=1024, active_subcarriers=800, cyclic_prefix_len=0,
                                     num_symbols=30, seed=2))
        pa = ReferencePa(snr_db=50.0)
        snr = measure_snr_db(pa.apply_clean(x), pa.apply(x, seed=3))
        assert abs(snr - 50.0) <= 0.2

    def test_noise_is_seeded(self, rng):
        x = rng.standard_normal(100) + 0j
        pa = ReferencePa()
        assert np.array_equal(pa.apply(x, seed=1), pa.apply(x, seed=1))
        assert not np.array_equal(pa.apply(x, seed=1), pa.apply(x, seed=2))

    def test_am_am_is_compressive(self):
        x = ofdm_generate(OfdmConfig(seed=5))
        r_lo, r_hi = np.percentile(np.abs(x), [10, 99])
        pa = ReferencePa()
        assert abs(pa.gain(r_hi)) < abs(pa.gain(r_lo))

    def test_planted_gmp_reproduces_clean_output(self, rng):
        x = 0.3 * (rng.standard_normal(400) + 1j * rng.standard_normal(400))
        pa = ReferencePa(snr_db=None)
        design = build_design(x, pa.apply(x), t0=20, n=300, m1=11, m2=11, p=5)
        planted = GmpModel(pa.to_gmp_tensor(11, 11, 5))
        assert np.allclose(planted.predict(design), design.y, atol=1e-13)

    def test_planted_tensor_needs_room(self):
        with pytest.raises(DimensionError):
            ReferencePa().to_gmp_tensor(11, 11, 4)

    def test_shipped_table_shape(self):
        table = reference_coefficients()
        assert table.shape == (11, 5)
        assert table[0, 0] == 1.0
        assert np.all(table[2:, 1:] == 0)

    def test_signal_too_short(self):
        with pytest.raises(DimensionError):
            ReferencePa().apply(np.ones(5))

    def test_empty_signal(self):
        with pytest.raises(DimensionError):
            ReferencePa().apply(np.array([]))

    def test_non_finite_coefficients(self):
        with pytest.raises(ArithmeticError):
            ReferencePa(memory_depth=1, coeffs=np.array([[np.inf]]))


class TestSignalFiles:
    """Signal files in CSV and container format"""

    @pytest.mark.parametrize('suffix', ['.csv', '.gmpt'])
    def test_round_trip_is_exact(self, rng, tmp_path, suffix):
        x = rng.standard_normal(30) + 1j * rng.standard_normal(30)
        path = save_signal(x, tmp_path / f"x{suffix}")
        assert np.array_equal(load_signal(path), x)

    def test_csv_header(self, tmp_path):
        path = save_signal(np.array([1 + 2j]), tmp_path / "x.csv")
        assert path.read_text().splitlines()[0] == "t,re,im"

    def test_bad_header(self, tmp_path):
        path = tmp_path / "x.csv"
        path.write_text("a,b,c\n0,1,2\n")
        with pytest.raises(ContainerError):
            load_signal(path)

    def test_unsupported_suffix(self, tmp_path):
        with pytest.raises(ValueError):
            save_signal(np.ones(2), tmp_path / "x.txt")
