"""
Tests for NMSE, sparsity, evaluation reports, comparison runs and sweeps
"""

import csv
import json
from pathlib import Path

import numpy as np
import pytest

from src.config import load_config
from src.errors import DimensionError
from src.identification import SolverConfig, als_cp, lasso_fit
from src.metrics import (
    NMSE_FLOOR_DB,
    REPORT_COLUMNS,
    EvalReport,
    evaluate_model,
    format_comparison_table,
    nmse,
    sparsity,
    time_simulation,
    write_reports_csv,
    write_reports_json,
    write_rows_csv,
)
from src.metrics.compare import (
    ExperimentData,
    als_convergence,
    compare_models,
    gamma_sweep,
    lasso_convergence,
    rank_sweep,
    rp_robustness,
    sketch_seeds,
)
from src.models import GmpModel

SMOKE_CONFIG = Path(__file__).resolve().parent.parent / 'configs' / 'smoke.json'


@pytest.fixture(scope='module')
def smoke_config():
    return load_config(SMOKE_CONFIG)


@pytest.fixture(scope='module')
def smoke_data(smoke_config):
    return ExperimentData.generate(smoke_config)


def sample_report(**overrides):
    fields = dict(
        model_kind='cp', ranks=(3,), dims=(11, 10, 8), nmse_db=-49.25, num_params=87, flops=2690,
        label='cp_r3', train_time_s=0.5, simulate_time_s=0.002,
    )
    fields.update(overrides)
    return EvalReport(**fields)


class TestNmse:
    """Normalized mean-square error in dB"""

    def test_exact_match_hits_floor(self, rng):
        y = rng.standard_normal(10) + 1j * rng.standard_normal(10)
        assert nmse(y, y) == NMSE_FLOOR_DB == -300.0

    def test_zero_model_is_zero_db(self, rng):
        y = rng.standard_normal(10) + 1j * rng.standard_normal(10)
        assert nmse(np.zeros(10), y) == pytest.approx(0.0, abs=1e-12)

    def test_thousandth_error_is_minus_sixty(self, rng):
        y = rng.standard_normal(20) + 1j * rng.standard_normal(20)
        assert nmse(1.001 * y, y) == pytest.approx(-60.0, abs=1e-6)

    def test_scaled_output(self, rng):
        y = rng.standard_normal(20) + 1j * rng.standard_normal(20)
        alpha = 0.9 + 0.2j
        assert nmse(alpha * y, y) == pytest.approx(20 * np.log10(abs(alpha - 1)), abs=1e-9)

    def test_common_phase_rotation(self, rng):
        y = rng.standard_normal(20) + 1j * rng.standard_normal(20)
        y_hat = y + 0.01 * rng.standard_normal(20)
        rot = np.exp(1j * 0.7)
        assert nmse(rot * y_hat, rot * y) == pytest.approx(nmse(y_hat, y), abs=1e-9)

    def test_length_mismatch(self):
        with pytest.raises(DimensionError):
            nmse(np.ones(3), np.ones(4))

    def test_zero_reference(self):
        with pytest.raises(ValueError):
            nmse(np.ones(3), np.zeros(3))


class TestSparsity:
    """Nonzero coefficient counts of the expanded tensor"""

    def test_counts_nonzeros(self):
        s = np.zeros((2, 2, 2), dtype=complex)
        s[0, 0, 0] = 1.0
        s[1, 1, 1] = 1e-3
        assert sparsity(GmpModel(s)) == (2, 0.25)
        assert sparsity(GmpModel(s), tol=1e-2) == (1, 0.125)

    def test_lasso_model(self, small_design):
        model, _ = lasso_fit(small_design, SolverConfig(gamma=1e-3, iterations=50, seed=0))
        count, fraction = sparsity(model)
        assert count == np.count_nonzero(model.s)
        assert fraction == pytest.approx(count / 36)

    def test_negative_tol(self):
        with pytest.raises(ValueError):
            sparsity(GmpModel(np.ones((1, 1, 1))), tol=-1.0)


class TestEvaluateModel:
    """EvalReport construction"""

    def test_fields(self, small_design):
        model, fit = als_cp(small_design, (2,), SolverConfig(iterations=2, seed=0))
        report = evaluate_model(model, small_design, label='cp2', fit_report=fit, repeats=3)
        assert report.model_kind == 'cp'
        assert report.ranks == (2,)
        assert report.dims == (4, 3, 3)
        assert report.num_params == 2 * 10
        assert report.flops == model.flops()
        assert report.nmse_db == pytest.approx(nmse(model.predict(small_design), small_design.y))
        assert report.train_time_s == fit.wall_time
        assert report.iteration_time_s is not None
        assert report.hosvd_time_s is None

    def test_nonzero_count_for_sparse_models(self, small_design):
        s = np.zeros((4, 3, 3), dtype=complex)
        s[0, 0, 1] = 1.0
        report = evaluate_model(GmpModel(s), small_design, repeats=1, count_nonzeros=True)
        assert report.num_params == 1

    def test_time_simulation(self, small_design):
        model = GmpModel(np.ones((4, 3, 3)))
        y_hat, seconds = time_simulation(model, small_design, repeats=2)
        assert np.array_equal(y_hat, model.predict(small_design))
        assert seconds >= 0
        with pytest.raises(ValueError):
            time_simulation(model, small_design, repeats=0)

    def test_dims_mismatch(self, small_design):
        with pytest.raises(DimensionError):
            evaluate_model(GmpModel(np.ones((2, 2, 2))), small_design)


class TestReportWriters:
    """Markdown table, CSV and JSON output"""

    def test_table_rows(self):
        table = format_comparison_table([sample_report(), sample_report(label='tt', ranks=(2, 2))])
        assert table.startswith("# Model Comparison")
        assert "| cp_r3 | (11, 10, 8) | 3 | -49.2500 | 87 | 2690 | 0.500 | 2.000 |" in table
        assert "| tt | (11, 10, 8) | 2, 2 |" in table

    def test_table_without_timings(self):
        table = format_comparison_table([sample_report()], include_timings=False)
        assert "Train" not in table
        assert table.splitlines()[-1] == "| cp_r3 | (11, 10, 8) | 3 | -49.2500 | 87 | 2690 |"

    def test_table_lists_warnings(self):
        table = format_comparison_table([sample_report(warnings=['rank-deficient B subproblem'])])
        assert "## Warnings" in table
        assert "- **cp_r3:** rank-deficient B subproblem" in table

    def test_csv(self, tmp_path):
        path = write_reports_csv([sample_report()], tmp_path / "reports" / "cmp.csv")
        with open(path, newline='') as f:
            rows = list(csv.DictReader(f))
        assert list(rows[0].keys()) == REPORT_COLUMNS
        assert rows[0]['dims'] == '11x10x8'
        assert float(rows[0]['nmse_db']) == -49.25
        assert rows[0]['hosvd_time_s'] == ''

    def test_csv_without_timings(self, tmp_path):
        path = write_reports_csv([sample_report()], tmp_path / "cmp.csv", include_timings=False)
        with open(path, newline='') as f:
            row = next(csv.DictReader(f))
        assert row['train_time_s'] == '' and row['simulate_time_s'] == ''

    def test_json_echoes_config(self, tmp_path):
        path = write_reports_json([sample_report()], tmp_path / "cmp.json", config={'seed': 1}, config_hash='abc')
        document = json.loads(path.read_text())
        assert document['config_hash'] == 'abc'
        assert document['config'] == {'seed': 1}
        assert document['reports'][0]['label'] == 'cp_r3'
        assert document['reports'][0]['warnings'] == []

    def test_rows_csv_blank_for_none(self, tmp_path):
        path = write_rows_csv([{'a': 1, 'b': None}], tmp_path / "rows.csv")
        assert path.read_text().splitlines() == ["a,b", "1,"]


class TestCompare:
    """End-to-end comparison and sweeps on the smoke config"""

    def test_compare_models(self, smoke_config, smoke_data):
        reports = compare_models(smoke_config, smoke_data)
        assert [r.label for r in reports] == [s.label for s in smoke_config.models]
        for report in reports:
            assert np.isfinite(report.nmse_db)
            assert report.dims == (5, 4, 3)
        rp = next(r for r in reports if r.label.startswith('rp-'))
        assert rp.hosvd_time_s is not None

    def test_data_windows(self, smoke_config, smoke_data):
        train = smoke_data.train((5, 4, 3))
        assert train.n == smoke_config.windows.train.n
        assert train.meta['window'] == 'train'
        assert smoke_data.train((5, 4, 3)) is train

    def test_gamma_sweep(self, smoke_config, smoke_data):
        rows = gamma_sweep(smoke_config, smoke_data)
        gammas = smoke_config.bench.gammas
        assert len(rows) == len(gammas) * len(smoke_config.bench.gamma_solvers)
        lasso = [r for r in rows if r['solver'] == 'gmp-lasso']
        assert lasso[-1]['nonzeros'] <= 60

    def test_gamma_sweep_rejects_als(self, smoke_config, smoke_data):
        with pytest.raises(ValueError):
            gamma_sweep(smoke_config, smoke_data, solvers=['cp'])

    def test_rank_sweep(self, smoke_config, smoke_data):
        rows = rank_sweep(smoke_config, smoke_data)
        assert [r['rank'] for r in rows] == [1, 2, 3]
        assert [r['num_params'] for r in rows] == [12, 24, 36]
        nmse_db = [r['nmse_db'] for r in rows]
        assert all(np.isfinite(v) and v < 0 for v in nmse_db)
        assert nmse_db[-1] <= nmse_db[0] + 0.1

    def test_rp_robustness(self, smoke_config, smoke_data):
        rows = rp_robustness(smoke_config, smoke_data, ranks=(2,))
        assert len(rows) == smoke_config.bench.rp_seeds
        assert len({r['sketch_seed'] for r in rows}) == len(rows)

    def test_sketch_seeds_deterministic(self):
        assert sketch_seeds(5, 3) == sketch_seeds(5, 3)
        assert len(set(sketch_seeds(5, 3))) == 3

    def test_convergence_exports(self, smoke_config, smoke_data):
        als = als_convergence(smoke_config, smoke_data, iterations=3)
        assert {r['family'] for r in als} == {'cp', 'tt', 'tucker'}
        assert len(als) == 9
        lasso = lasso_convergence(smoke_config, smoke_data, iterations=20)
        assert {r['method'] for r in lasso} == {'fista', 'pgd'}
        assert len(lasso) == 40
