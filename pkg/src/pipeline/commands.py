"""
Pipeline commands

Each cmd_* takes the parsed argparse namespace of pipeline.py, prints its
stage banners and returns the files it wrote. Exceptions propagate; the CLI
maps them to exit codes.
"""

import dataclasses
import logging
from pathlib import Path
from typing import Callable, Dict, List, Optional

import numpy as np

from ..config import ExperimentConfig, ModelSpec, config_hash, load_config
from ..decomposition import save_projection
from ..errors import ConfigError, ContainerError
from ..identification import SOLVER_KINDS
from ..metrics import (
    evaluate_model,
    format_comparison_table,
    write_reports_csv,
    write_reports_json,
)
from ..metrics.compare import (
    ExperimentData,
    compare_models,
    als_convergence,
    fit_spec,
    gamma_sweep,
    lasso_convergence,
    rank_sweep,
    rp_robustness,
)
from ..models import load_model, read_model_document, save_model
from ..signals import SIGNAL_FORMATS, load_signal, measure_snr_db, save_signal
from .outputs import output_dir, read_manifest, write_manifest, write_rows

logger = logging.getLogger(__name__)

SPARSE_SOLVERS = ('gmp-lasso', 'gmp-pgd')


def banner(title: str) -> None:
    print(f"\n{'='*60}")
    print(title)
    print(f"{'='*60}")


# ----------------------------------------------------------------------
# argument helpers


def parse_int_list(text: Optional[str], what: str) -> Optional[List[int]]:
    """'2,2' -> [2, 2]"""
    if text is None:
        return None
    try:
        values = [int(v) for v in str(text).replace('x', ',').split(',') if v.strip()]
    except ValueError:
        raise ConfigError(f"--{what} expects comma-separated integers, got '{text}'")
    if not values:
        raise ConfigError(f"--{what} is empty")
    return values


def resolve_config(args) -> ExperimentConfig:
    """Config file plus command-line overrides (re-validated)"""
    cfg = load_config(getattr(args, 'config', None))
    if getattr(args, 'seed', None) is not None:
        cfg.seed = int(args.seed)
    proj = parse_int_list(getattr(args, 'proj', None), 'proj')
    if proj is not None:
        if len(proj) != 2:
            raise ConfigError(f"--proj expects M2~,P~, got {proj}")
        cfg.projection.m2, cfg.projection.p = proj
    cfg.validate()
    return cfg


def output_base(args, cfg: ExperimentConfig) -> Path:
    return Path(getattr(args, 'out', None) or cfg.output.dir)


def select_model_spec(cfg: ExperimentConfig, args) -> ModelSpec:
    """Configured model by label (or solver name), then flag overrides"""
    selector = args.model
    configured = any(selector in (s.label, s.name, s.solver) for s in cfg.models)
    if not configured and selector in SOLVER_KINDS:
        spec = ModelSpec(solver=selector)
    else:
        spec = cfg.find_model(selector)

    overrides = {}
    if args.gamma is not None:
        overrides['gamma'] = float(args.gamma)
    if args.iters is not None:
        overrides['iterations'] = int(args.iters)
    ranks = parse_int_list(args.ranks, 'ranks')
    if ranks is not None:
        overrides['ranks'] = ranks
    dims = parse_int_list(args.dims, 'dims')
    if dims is not None:
        if len(dims) != 3:
            raise ConfigError(f"--dims expects M1,M2,P, got {dims}")
        overrides['dims'] = dims
    if args.rp_als:
        overrides['rp_als'] = True
    spec = dataclasses.replace(spec, **overrides)
    cfg.validate_model(spec, f"model '{spec.label}'")
    return spec


def signal_paths(directory: Path, fmt: str) -> Dict[str, Path]:
    suffix = '.csv' if fmt == 'csv' else '.gmpt'
    return {'x': directory / f"x{suffix}", 'y': directory / f"y{suffix}"}


def load_experiment_data(cfg: ExperimentConfig, data_dir: Path) -> ExperimentData:
    """Signals written by cmd_generate"""
    data_dir = Path(data_dir)
    found = {}
    for name in ('x', 'y'):
        candidates = [data_dir / f"{name}{s}" for s in SIGNAL_FORMATS if (data_dir / f"{name}{s}").exists()]
        if not candidates:
            raise FileNotFoundError(f"No signal file '{name}' ({', '.join(SIGNAL_FORMATS)}) in {data_dir}")
        found[name] = load_signal(candidates[0])
    x, y = found['x'], found['y']
    if x.size != y.size:
        raise ContainerError(f"{data_dir}: x has {x.size} samples but y has {y.size}")

    try:
        manifest = read_manifest(data_dir)
    except FileNotFoundError:
        manifest = None
    if manifest is None:
        print(f"⚠ No manifest in {data_dir}; signal provenance unknown")
    elif manifest.get('config', {}).get('seed') != cfg.seed:
        print(f"⚠ Signals were generated with seed {manifest['config'].get('seed')}, config has {cfg.seed}")
    return ExperimentData(config=cfg, x=x, y=y)


def data_for(args, cfg: ExperimentConfig, base: Path) -> ExperimentData:
    data_dir = getattr(args, 'data', None)
    if data_dir:
        return load_experiment_data(cfg, Path(data_dir))
    default = base / 'signals'
    if default.exists():
        return load_experiment_data(cfg, default)
    return ExperimentData.generate(cfg)


# ----------------------------------------------------------------------
# commands


def cmd_generate(args) -> List[Path]:
    cfg = resolve_config(args)
    base = output_base(args, cfg)
    seeds = cfg.component_seeds()

    banner("GENERATING SIGNALS")
    ofdm = cfg.ofdm_config()
    print(f"OFDM: {ofdm.num_symbols} symbols x {ofdm.symbol_len} samples, "
          f"{ofdm.active_subcarriers}/{ofdm.fft_len} active subcarriers")
    pa = cfg.reference_pa()
    print(f"PA: memory depth {pa.memory_depth}, order {pa.order}, "
          f"SNR {'noiseless' if pa.noiseless else f'{pa.snr_db} dB'}")

    data = ExperimentData.generate(cfg)
    snr = measure_snr_db(pa.apply_clean(data.x), data.y)

    sig_dir = output_dir(base, 'signals')
    paths = signal_paths(sig_dir, cfg.output.signal_format)
    files = [save_signal(data.x, paths['x']), save_signal(data.y, paths['y'])]
    manifest = write_manifest(
        sig_dir, 'generate', cfg.to_dict(), config_hash(cfg), seeds, files,
        extra={
            'samples': int(data.x.size),
            'measured_snr_db': snr if np.isfinite(snr) else None,
        },
    )

    print(f"\n✓ Wrote {data.x.size} samples")
    for f in files:
        print(f"  {f}")
    print(f"  Measured SNR: {snr:.2f} dB" if np.isfinite(snr) else "  Noiseless output")
    print(f"  Manifest: {manifest}")
    return files + [manifest]


def cmd_train(args) -> List[Path]:
    cfg = resolve_config(args)
    base = output_base(args, cfg)
    spec = select_model_spec(cfg, args)
    data = data_for(args, cfg, base)
    include_timings = not args.omit_timings

    banner(f"TRAINING {spec.label.upper()}")
    print(f"Solver: {spec.solver}  dims {tuple(spec.dims)}  ranks {tuple(spec.ranks) or '-'}")
    print(f"gamma {spec.gamma:g}, {spec.iterations} iteration(s)"
          + (f", projection {cfg.projection_target}" if spec.rp_als else ""))

    model, fit = fit_spec(data, spec)

    model_dir = output_dir(base, 'models')
    info = {
        'label': spec.label,
        'solver': spec.solver,
        'rp_als': spec.rp_als,
        'gamma': spec.gamma,
        'iterations': spec.iterations,
        'config_hash': config_hash(cfg),
        'train_window': dataclasses.asdict(cfg.windows.train),
        'train_nmse_db': fit.nmse_trace[-1] if fit.nmse_trace else None,
        'warnings': list(fit.warnings),
    }
    files = [save_model(model, model_dir / f"{spec.label}.json", info)]
    if fit.projection is not None:
        files.append(save_projection(fit.projection, model_dir / f"{spec.label}.gmpp"))

    trace = write_rows(
        fit.rows(include_timings), output_dir(base, 'reports') / f"{spec.label}_trace", args.format,
        columns=['iteration', 'block', 'objective', 'fit', 'nmse_db', 'elapsed_ms'],
        header={'label': spec.label, 'solver': fit.solver, 'config_hash': config_hash(cfg)},
    )
    files.append(trace)

    for w in fit.warnings:
        print(f"⚠ {w}")
    print(f"\n✓ Trained {model.kind} model: {model.num_params()} parameters, {model.flops()} FLOPs/sample")
    if fit.nmse_trace:
        print(f"  Training NMSE: {fit.nmse_trace[-1]:.2f} dB after {fit.iterations} iteration(s)")
    for f in files:
        print(f"  {f}")
    return files


def cmd_evaluate(args) -> List[Path]:
    cfg = resolve_config(args)
    base = output_base(args, cfg)
    model_file = Path(args.model_file)
    model = load_model(model_file)
    document = read_model_document(model_file)
    label = document.get('info', {}).get('label') or model_file.stem
    solver = document.get('info', {}).get('solver', '')
    data = data_for(args, cfg, base)
    include_timings = not args.omit_timings

    banner(f"EVALUATING {label.upper()} ON {args.window.upper()} WINDOW")
    design = data.design(args.window, model.dims)
    print(f"Window: t0={design.t0}, N={design.n}")
    report = evaluate_model(
        model, design, label=label, repeats=cfg.bench.repeats,
        count_nonzeros=solver in SPARSE_SOLVERS,
    )

    eval_dir = output_dir(base, 'evaluations')
    stem = eval_dir / f"{label}_{args.window}"
    if args.format == 'json':
        path = write_reports_json([report], stem.with_suffix('.json'), cfg.to_dict(), config_hash(cfg), include_timings)
    else:
        path = write_reports_csv([report], stem.with_suffix('.csv'), include_timings)

    print(f"\n✓ NMSE: {report.nmse_db:.4f} dB")
    print(f"  Parameters: {report.num_params}{' (nonzero)' if solver in SPARSE_SOLVERS else ''}")
    print(f"  FLOPs/sample: {report.flops}")
    if include_timings:
        print(f"  Simulation time: {report.simulate_time_s * 1e3:.3f} ms (median of {cfg.bench.repeats})")
    print(f"  Report: {path}")
    return [path]


def cmd_bench(args) -> List[Path]:
    cfg = resolve_config(args)
    base = output_base(args, cfg)
    data = data_for(args, cfg, base)
    bench_dir = output_dir(base, 'bench')
    include_timings = not args.omit_timings
    files = []

    if args.sweep in ('models', 'all'):
        if not cfg.models:
            raise ConfigError("bench needs at least one entry under 'models'")
        reports = []
        for dims in cfg.bench.dims:
            banner(f"COMPARING MODELS AT (M1, M2, P) = {tuple(dims)}")
            group = compare_models(cfg, data, dims=dims)
            for r in group:
                print(f"  ✓ {r.label:<24} {r.nmse_db:9.4f} dB  {r.num_params:5d} params  {r.flops:6d} FLOPs")
            reports.extend(group)

        table = bench_dir / 'comparison.md'
        table.write_text(format_comparison_table(reports, include_timings), encoding='utf-8')
        if args.format == 'json':
            files.append(write_reports_json(reports, bench_dir / 'comparison.json', cfg.to_dict(),
                                            config_hash(cfg), include_timings))
        else:
            files.append(write_reports_csv(reports, bench_dir / 'comparison.csv', include_timings))
        files.append(table)

    if args.sweep in ('gamma', 'all'):
        banner("PENALTY SWEEP")
        rows = gamma_sweep(cfg, data)
        files.append(write_rows(rows, bench_dir / 'gamma_sweep', args.format,
                                columns=['solver', 'gamma', 'nmse_db', 'nonzeros']))
        print(f"  ✓ {len(rows)} points")

    if args.sweep in ('rank', 'all'):
        banner("CP RANK SWEEP")
        rows = rank_sweep(cfg, data)
        files.append(write_rows(rows, bench_dir / 'rank_sweep', args.format,
                                columns=['rank', 'nmse_db', 'num_params']))
        for row in rows:
            print(f"  ✓ R={row['rank']}: {row['nmse_db']:.4f} dB")

    manifest = write_manifest(bench_dir, f"bench:{args.sweep}", cfg.to_dict(), config_hash(cfg),
                              cfg.component_seeds(), files)
    print(f"\n✓ Bench results in {bench_dir}")
    return files + [manifest]


# ----------------------------------------------------------------------
# plot-ready exports


def _export_am_am(cfg: ExperimentConfig, data: ExperimentData) -> List[dict]:
    pa = cfg.reference_pa()
    r = np.linspace(0.0, float(np.max(np.abs(data.x))), 101)
    gain = pa.gain(r)
    return [
        {'r': float(ri), 'output': float(oi), 'gain_db': float(gi), 'phase_deg': float(pi)}
        for ri, oi, gi, pi in zip(
            r, pa.am_am(r), 20 * np.log10(np.abs(gain)), np.degrees(np.angle(gain)),
        )
    ]


# Registry: export name -> rows builder
EXPORTS: Dict[str, Callable[[ExperimentConfig, ExperimentData], List[dict]]] = {
    'als-convergence': lambda cfg, data: als_convergence(cfg, data),
    'lasso-convergence': lambda cfg, data: lasso_convergence(cfg, data),
    'gamma-sweep': lambda cfg, data: gamma_sweep(cfg, data),
    'rank-sweep': lambda cfg, data: rank_sweep(cfg, data),
    'rp-robustness': lambda cfg, data: rp_robustness(cfg, data),
    'am-am': _export_am_am,
}


def list_exports():
    return list(EXPORTS.keys())


def cmd_export(args) -> List[Path]:
    cfg = resolve_config(args)
    base = output_base(args, cfg)
    data = data_for(args, cfg, base)
    names = list_exports() if args.what == 'all' else [args.what]
    export_dir = output_dir(base, 'exports')

    files = []
    for name in names:
        banner(f"EXPORTING {name.upper()}")
        rows = EXPORTS[name](cfg, data)
        path = write_rows(rows, export_dir / name.replace('-', '_'), 'csv')
        print(f"  ✓ {len(rows)} rows -> {path}")
        files.append(path)
    return files


# Registry: subcommand -> handler
COMMANDS = {
    'generate': cmd_generate,
    'train': cmd_train,
    'evaluate': cmd_evaluate,
    'bench': cmd_bench,
    'export': cmd_export,
}
