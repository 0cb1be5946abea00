"""
Evaluation metrics and reports

compare.py (model comparison and sweeps) is imported directly as
src.metrics.compare: it depends on the identification package, which in
turn imports this package's nmse.
"""

from .nmse import NMSE_FLOOR_DB, nmse, sparsity
from .report import (
    DEFAULT_REPEATS,
    REPORT_COLUMNS,
    EvalReport,
    evaluate_model,
    format_comparison_table,
    time_simulation,
    write_reports_csv,
    write_reports_json,
    write_rows_csv,
)

__all__ = [
    'NMSE_FLOOR_DB',
    'nmse',
    'sparsity',
    'DEFAULT_REPEATS',
    'REPORT_COLUMNS',
    'EvalReport',
    'evaluate_model',
    'format_comparison_table',
    'time_simulation',
    'write_reports_csv',
    'write_reports_json',
    'write_rows_csv',
]
