"""
Evaluation reports

One EvalReport per trained model: test NMSE, parameter and FLOP counts and
timings. Reports render as a markdown comparison table and are written as
CSV or JSON (JSON carries the full config echo).
"""

import csv
import json
import statistics
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..dataset import DesignSet
from .nmse import nmse, sparsity

DEFAULT_REPEATS = 5

# column order of CSV files and tables
REPORT_COLUMNS = [
    'label', 'model_kind', 'dims', 'ranks', 'nmse_db', 'num_params', 'flops',
    'train_time_s', 'simulate_time_s', 'hosvd_time_s', 'iteration_time_s',
]
TIMING_COLUMNS = ('train_time_s', 'simulate_time_s', 'hosvd_time_s', 'iteration_time_s')


@dataclass
class EvalReport:
    model_kind: str
    ranks: Tuple[int, ...]
    dims: Tuple[int, int, int]
    nmse_db: float
    num_params: int
    flops: int
    label: str = ''
    train_time_s: Optional[float] = None
    simulate_time_s: Optional[float] = None
    hosvd_time_s: Optional[float] = None
    iteration_time_s: Optional[float] = None
    warnings: List[str] = field(default_factory=list)

    def to_row(self, include_timings: bool = True) -> Dict[str, object]:
        row = asdict(self)
        row.pop('warnings')
        row['dims'] = 'x'.join(str(d) for d in self.dims)
        row['ranks'] = 'x'.join(str(r) for r in self.ranks)
        if not include_timings:
            for key in TIMING_COLUMNS:
                row[key] = None
        return {key: row[key] for key in REPORT_COLUMNS}


def time_simulation(model, design: DesignSet, repeats: int = DEFAULT_REPEATS) -> Tuple[np.ndarray, float]:
    """(prediction, median wall time of `repeats` predictions)"""
    if repeats < 1:
        raise ValueError(f"repeats must be >= 1, got {repeats}")
    times = []
    y_hat = None
    for _ in range(repeats):
        tic = time.perf_counter()
        y_hat = model.predict(design)
        times.append(time.perf_counter() - tic)
    return y_hat, statistics.median(times)


def evaluate_model(
    model,
    design: DesignSet,
    label: str = '',
    fit_report=None,
    repeats: int = DEFAULT_REPEATS,
    count_nonzeros: bool = False,
) -> EvalReport:
    """
    Score a model on a (test) design set.

    count_nonzeros reports the nonzero GMP coefficients instead of the
    structural parameter count (used for LASSO models).
    """
    model.check_design(design)
    y_hat, sim_time = time_simulation(model, design, repeats)
    num_params = sparsity(model)[0] if count_nonzeros else model.num_params()

    report = EvalReport(
        model_kind=model.kind,
        ranks=tuple(model.ranks),
        dims=tuple(model.dims),
        nmse_db=nmse(y_hat, design.y),
        num_params=int(num_params),
        flops=int(model.flops()),
        label=label or model.kind,
        simulate_time_s=sim_time,
    )
    if fit_report is not None:
        report.train_time_s = fit_report.wall_time
        if fit_report.iteration_times:
            report.iteration_time_s = statistics.median(fit_report.iteration_times)
        if fit_report.projection is not None:
            report.hosvd_time_s = fit_report.hosvd_time
        report.warnings = list(fit_report.warnings)
    return report


def _fmt(value, spec: str) -> str:
    return '-' if value is None else format(value, spec)


def format_comparison_table(reports: Sequence[EvalReport], include_timings: bool = True) -> str:
    """Markdown comparison table, one row per model"""
    table = "# Model Comparison\n\n"
    if include_timings:
        table += "| Model | (M1, M2, P) | Ranks | NMSE (dB) | Params | FLOPs | Train (s) | Simulate (ms) |\n"
        table += "|-------|-------------|-------|-----------|--------|-------|-----------|---------------|\n"
    else:
        table += "| Model | (M1, M2, P) | Ranks | NMSE (dB) | Params | FLOPs |\n"
        table += "|-------|-------------|-------|-----------|--------|-------|\n"

    for r in reports:
        ranks = ', '.join(str(x) for x in r.ranks) or '-'
        row = f"| {r.label} | {r.dims} | {ranks} | {r.nmse_db:.4f} | {r.num_params} | {r.flops} |"
        if include_timings:
            sim_ms = None if r.simulate_time_s is None else r.simulate_time_s * 1e3
            row += f" {_fmt(r.train_time_s, '.3f')} | {_fmt(sim_ms, '.3f')} |"
        table += row + "\n"

    flagged = [r for r in reports if r.warnings]
    if flagged:
        table += "\n## Warnings\n\n"
        for r in flagged:
            for w in r.warnings:
                table += f"- **{r.label}:** {w}\n"
    return table


def write_rows_csv(rows: Sequence[dict], path: Union[str, Path], columns: Optional[Sequence[str]] = None) -> Path:
    """CSV with a header row; None is written as an empty cell"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    columns = list(columns or (rows[0].keys() if rows else []))
    with open(path, 'w', newline='', encoding='utf-8') as f:
        writer = csv.DictWriter(f, fieldnames=columns, lineterminator='\n')
        writer.writeheader()
        for row in rows:
            writer.writerow({k: ('' if row.get(k) is None else _cell(row.get(k))) for k in columns})
    return path


def _cell(value):
    if isinstance(value, float):
        return repr(value)
    return value


def write_reports_csv(reports: Sequence[EvalReport], path: Union[str, Path], include_timings: bool = True) -> Path:
    return write_rows_csv([r.to_row(include_timings) for r in reports], path, REPORT_COLUMNS)


def write_reports_json(
    reports: Sequence[EvalReport],
    path: Union[str, Path],
    config: Optional[dict] = None,
    config_hash: Optional[str] = None,
    include_timings: bool = True,
) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    document = {
        'config_hash': config_hash,
        'config': config,
        'reports': [
            dict(r.to_row(include_timings), warnings=list(r.warnings))
            for r in reports
        ],
    }
    path.write_text(json.dumps(document, indent=2, sort_keys=True) + "\n", encoding='utf-8')
    return path
