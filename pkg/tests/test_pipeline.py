"""
End-to-end tests of the pipeline CLI on the smoke config
"""

import csv
import json
from pathlib import Path

import pytest

import pipeline
from src.errors import EXIT_CONFIG, EXIT_IO, EXIT_OK
from src.models import load_model
from src.pipeline import get_command, list_commands, read_manifest

SMOKE = str(Path(__file__).resolve().parent.parent / 'configs' / 'smoke.json')


def run(*argv):
    return pipeline.main([str(a) for a in argv])


def read_csv(path):
    with open(path, newline='') as f:
        return list(csv.DictReader(f))


def train_and_evaluate(out, label='cp_r2'):
    assert run('generate', '--config', SMOKE, '--out', out) == EXIT_OK
    assert run('train', '--config', SMOKE, '--out', out, '--model', label, '--omit-timings') == EXIT_OK
    model_file = out / 'models' / f"{label}.json"
    assert run('evaluate', '--config', SMOKE, '--out', out, '--model-file', model_file, '--omit-timings') == EXIT_OK
    return model_file


class TestGenerate:
    """Signal generation"""

    def test_writes_signals_and_manifest(self, tmp_path):
        assert run('generate', '--config', SMOKE, '--out', tmp_path) == EXIT_OK
        sig = tmp_path / 'signals'
        assert (sig / 'x.csv').exists() and (sig / 'y.csv').exists()
        manifest = read_manifest(sig)
        assert manifest['command'] == 'generate'
        assert manifest['samples'] == 8 * (256 + 16)
        assert set(manifest['files']) == {'x.csv', 'y.csv'}
        assert set(manifest['seeds']) == {'ofdm', 'noise', 'init', 'sketch'}
        assert abs(manifest['measured_snr_db'] - 50.0) < 3.0

    def test_seed_override_changes_signals(self, tmp_path):
        run('generate', '--config', SMOKE, '--out', tmp_path / 'a')
        run('generate', '--config', SMOKE, '--out', tmp_path / 'b', '--seed', 8)
        a = (tmp_path / 'a' / 'signals' / 'x.csv').read_bytes()
        b = (tmp_path / 'b' / 'signals' / 'x.csv').read_bytes()
        assert a != b


class TestTrainEvaluate:
    """Training and scoring single models"""

    def test_cp_model_files(self, tmp_path):
        model = load_model(train_and_evaluate(tmp_path))
        assert json.loads((tmp_path / 'models' / 'cp_r2.json').read_text())['info']['solver'] == 'cp'
        assert model.dims == (5, 4, 3)
        trace = read_csv(tmp_path / 'reports' / 'cp_r2_trace.csv')
        assert len(trace) == 3 * 3
        assert all(row['elapsed_ms'] == '' for row in trace)
        rows = read_csv(tmp_path / 'evaluations' / 'cp_r2_test.csv')
        assert rows[0]['model_kind'] == 'cp'
        assert rows[0]['num_params'] == '24'

    def test_rp_als_writes_projection(self, tmp_path):
        run('generate', '--config', SMOKE, '--out', tmp_path)
        code = run('train', '--config', SMOKE, '--out', tmp_path, '--model', 'rp-cp_r2')
        assert code == EXIT_OK
        assert (tmp_path / 'models' / 'rp-cp_r2.gmpp').exists()

    def test_flag_overrides(self, tmp_path):
        run('generate', '--config', SMOKE, '--out', tmp_path)
        code = run('train', '--config', SMOKE, '--out', tmp_path, '--model', 'tucker',
                   '--rank', '1,2,2', '--iters', 2, '--format', 'json')
        assert code == EXIT_OK
        model = load_model(tmp_path / 'models' / 'tucker_r1x2x2.json')
        assert model.ranks == (1, 2, 2)
        trace = json.loads((tmp_path / 'reports' / 'tucker_r1x2x2_trace.json').read_text())
        assert trace['solver'] == 'tucker'
        assert len(trace['rows']) == 2 * 4

    def test_lasso_reports_nonzeros(self, tmp_path):
        run('generate', '--config', SMOKE, '--out', tmp_path)
        run('train', '--config', SMOKE, '--out', tmp_path, '--model', 'gmp-lasso',
            '--dims', '5,4,3', '--gamma', 1.0, '--iters', 30)
        run('evaluate', '--config', SMOKE, '--out', tmp_path, '--model-file',
            tmp_path / 'models' / 'gmp-lasso.json', '--window', 'train')
        row = read_csv(tmp_path / 'evaluations' / 'gmp-lasso_train.csv')[0]
        assert int(row['num_params']) <= 60

    def test_without_generate_uses_memory(self, tmp_path):
        code = run('train', '--config', SMOKE, '--out', tmp_path, '--model', 'gmp-ls')
        assert code == EXIT_OK
        assert (tmp_path / 'models' / 'gmp-ls.json').exists()


class TestDeterminism:
    """Reruns with the same config give byte-identical files"""

    def test_rerun_is_byte_identical(self, tmp_path):
        first, second = tmp_path / 'first', tmp_path / 'second'
        train_and_evaluate(first)
        train_and_evaluate(second)
        compared = 0
        for sub in ('signals', 'models', 'reports', 'evaluations'):
            for path in sorted((first / sub).iterdir()):
                assert path.read_bytes() == (second / sub / path.name).read_bytes(), path.name
                compared += 1
        assert compared >= 8


class TestBenchExport:
    """Comparison tables, sweeps and plot-ready exports"""

    def test_bench_all(self, tmp_path):
        assert run('bench', '--config', SMOKE, '--out', tmp_path, '--sweep', 'all', '--omit-timings') == EXIT_OK
        bench = tmp_path / 'bench'
        rows = read_csv(bench / 'comparison.csv')
        assert [r['label'] for r in rows] == ['gmp-ls', 'cp_r2', 'tt_r2x2', 'tucker_r2x2x2', 'rp-cp_r2']
        assert rows[0]['num_params'] == '60'
        assert (bench / 'comparison.md').read_text().startswith("# Model Comparison")
        assert len(read_csv(bench / 'gamma_sweep.csv')) == 6
        assert len(read_csv(bench / 'rank_sweep.csv')) == 3
        assert read_manifest(bench)['command'] == 'bench:all'

    def test_export_am_am(self, tmp_path):
        assert run('export', '--config', SMOKE, '--out', tmp_path, '--what', 'am-am') == EXIT_OK
        rows = read_csv(tmp_path / 'exports' / 'am_am.csv')
        assert len(rows) == 101
        assert float(rows[0]['r']) == 0.0

    def test_export_lasso_convergence(self, tmp_path):
        assert run('export', '--config', SMOKE, '--out', tmp_path, '--what', 'lasso-convergence') == EXIT_OK
        rows = read_csv(tmp_path / 'exports' / 'lasso_convergence.csv')
        assert {r['method'] for r in rows} == {'fista', 'pgd'}


class TestExitCodes:
    """Failures map to documented exit codes"""

    def test_unknown_config_key(self, tmp_path, capsys):
        bad = tmp_path / 'bad.json'
        bad.write_text('{"sed": 1}')
        assert run('generate', '--config', bad, '--out', tmp_path) == EXIT_CONFIG
        assert "ERROR:" in capsys.readouterr().out

    def test_missing_config(self, tmp_path):
        assert run('generate', '--config', tmp_path / 'none.json', '--out', tmp_path) == EXIT_IO

    def test_missing_model_file(self, tmp_path):
        code = run('evaluate', '--config', SMOKE, '--out', tmp_path, '--model-file', tmp_path / 'nope.json')
        assert code == EXIT_IO

    def test_unknown_model(self, tmp_path):
        assert run('train', '--config', SMOKE, '--out', tmp_path, '--model', 'volterra') == EXIT_CONFIG

    def test_bad_rank_list(self, tmp_path):
        code = run('train', '--config', SMOKE, '--out', tmp_path, '--model', 'cp', '--rank', 'two')
        assert code == EXIT_CONFIG

    def test_projection_too_large(self, tmp_path):
        code = run('train', '--config', SMOKE, '--out', tmp_path, '--model', 'cp', '--rp-als', '--proj', '5,3')
        assert code == EXIT_CONFIG

    def test_missing_data_dir(self, tmp_path):
        code = run('train', '--config', SMOKE, '--out', tmp_path, '--model', 'cp', '--data', tmp_path / 'none')
        assert code == EXIT_IO


class TestCommandRegistry:
    """Subcommand registry"""

    def test_list(self):
        assert list_commands() == ['generate', 'train', 'evaluate', 'bench', 'export']

    def test_unknown(self):
        with pytest.raises(ValueError, match="Available"):
            get_command('plot')
