#!/usr/bin/env python3
"""
Tensor GMP pipeline CLI

Synthetic PA data, model identification, evaluation and benchmarks.

Usage:
    python pipeline.py generate --config configs/smoke.json
    python pipeline.py train --config configs/smoke.json --model cp --rank 3
    python pipeline.py evaluate --config configs/smoke.json --model-file outputs/models/cp_r3.json
    python pipeline.py bench --config configs/protocol.json
    python pipeline.py export --config configs/protocol.json --what als-convergence

Output:
    outputs/signals/      x, y and manifest.json
    outputs/models/       {label}.json + factor containers
    outputs/reports/      {label}_trace.csv
    outputs/evaluations/  {label}_{window}.csv
    outputs/bench/        comparison.md, comparison.csv, sweeps
    outputs/exports/      plot-ready CSVs

Exit codes: 0 success, 2 config error, 3 numeric failure, 4 I/O error.
"""

import argparse
import logging
import sys

from src.errors import EXIT_OK, exit_code_for
from src.identification import list_solvers
from src.pipeline import get_command, list_exports


def _add_common(parser):
    parser.add_argument(
        '--config',
        help='Experiment config JSON (default: built-in protocol)'
    )
    parser.add_argument(
        '--seed',
        type=int,
        help='Root seed override'
    )
    parser.add_argument(
        '--out',
        help='Output directory base (default: output.dir of the config)'
    )
    parser.add_argument(
        '--format',
        choices=['csv', 'json'],
        default='csv',
        help='Report format (default: csv)'
    )
    parser.add_argument(
        '--proj',
        help='Projection dims M2~,P~ for RP-ALS (overrides the config)'
    )
    parser.add_argument(
        '--verbose',
        action='store_true',
        help='Debug logging'
    )


def _add_data(parser):
    parser.add_argument(
        '--data',
        help='Directory with signals from "generate" (default: <out>/signals, else generate in memory)'
    )
    parser.add_argument(
        '--omit-timings',
        action='store_true',
        help='Leave timing columns empty (byte-reproducible reports)'
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description='Tensor-compressed GMP power-amplifier models',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=f"""
Available solvers: {', '.join(list_solvers())}
Available exports: {', '.join(list_exports())}

Examples:
    # Generate the OFDM input and the reference PA output
    python pipeline.py generate --config configs/smoke.json

    # Train CP rank 3 through random projections (M2~, P~) = (5, 3)
    python pipeline.py train --config configs/protocol.json --model cp --rank 3 --rp-als --proj 5,3

    # Score a trained model on the test window
    python pipeline.py evaluate --config configs/protocol.json --model-file outputs/models/rp-cp_r3.json

    # Model comparison table plus penalty and rank sweeps
    python pipeline.py bench --config configs/protocol.json --sweep all
        """
    )
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('generate', help='Generate input/output signals')
    _add_common(p)

    p = sub.add_parser('train', help='Train one model')
    _add_common(p)
    _add_data(p)
    p.add_argument(
        '--model',
        required=True,
        help=f'Configured model label, or a solver name: {", ".join(list_solvers())}'
    )
    p.add_argument('--rank', '--ranks', dest='ranks', help='Ranks, e.g. 3 (cp), 2,2 (tt), 2,2,2 (tucker)')
    p.add_argument('--dims', help='GMP dims M1,M2,P')
    p.add_argument('--gamma', type=float, help='Penalty weight')
    p.add_argument('--iters', type=int, help='ALS sweeps or proximal-gradient steps')
    p.add_argument('--rp-als', action='store_true', help='Identify through random projections')

    p = sub.add_parser('evaluate', help='Evaluate a trained model')
    _add_common(p)
    _add_data(p)
    p.add_argument('--model-file', required=True, help='Model JSON written by "train"')
    p.add_argument('--window', choices=['train', 'test'], default='test', help='Data window (default: test)')

    p = sub.add_parser('bench', help='Compare models and run sweeps')
    _add_common(p)
    _add_data(p)
    p.add_argument(
        '--sweep',
        choices=['models', 'gamma', 'rank', 'all'],
        default='models',
        help='What to run (default: models)'
    )

    p = sub.add_parser('export', help='Write plot-ready CSVs')
    _add_common(p)
    _add_data(p)
    p.add_argument('--what', choices=list_exports() + ['all'], default='all', help='Export (default: all)')

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format='%(levelname)s %(name)s: %(message)s',
    )
    try:
        get_command(args.command)(args)
    except Exception as e:
        print(f"ERROR: {e}")
        logging.getLogger(__name__).debug("command failed", exc_info=True)
        return exit_code_for(e)
    return EXIT_OK


if __name__ == '__main__':
    sys.exit(main())
