"""
ALS for the GMP-CP model

Each sweep solves three ridge subproblems in turn (A, then B, then C), the
other two factors held fixed:

    A:  D[n, i, r] = h[n, i] * (M x2 b_r x3 c_r)[n]
    B:  E[n, j, r] = (H A)[n, r] * (M x3 c_r)[n, j]
    C:  F[n, p, r] = (H A)[n, r] * (M x2 b_r)[n, p]
"""

import logging
import time
from typing import Dict, Optional, Tuple

import numpy as np

from ..dataset import DesignSet
from ..errors import DimensionError
from ..models import CpModel
from ..tensor import khatri_rao
from .common import (
    FitReport,
    SolverConfig,
    SweepRecorder,
    initial_factors,
    solve_block,
)

logger = logging.getLogger(__name__)


def als_cp(
    design: DesignSet,
    rank: int,
    cfg: SolverConfig,
    init: Optional[Dict[str, np.ndarray]] = None,
) -> Tuple[CpModel, FitReport]:
    cfg.validate()
    rank = int(rank[0]) if isinstance(rank, (tuple, list)) else int(rank)
    if rank < 1:
        raise DimensionError(f"CP rank must be >= 1, got {rank}")
    m1, m2, p = design.dims
    n = design.n

    factors = init if init is not None else initial_factors('cp', design.dims, (rank,), cfg)
    a, b, c = factors['a'], factors['b'], factors['c']
    model = CpModel(a=a, b=b, c=c)
    if model.dims != design.dims or model.ranks != (rank,):
        raise DimensionError(f"Initial CP factors {model.dims}/{model.ranks} do not match {design.dims}/{rank}")

    report = FitReport(solver='cp')
    recorder = SweepRecorder(report, design, cfg)
    h, m, mu, y = design.h, design.m.array, design.basis_matrix(), design.y
    tic = time.perf_counter()
    recorder.start(model)

    for _ in range(cfg.iterations):
        v = mu @ khatri_rao(c, b)
        a = solve_block(report, 'A', h[:, :, None] * v[:, None, :], y, cfg.gamma, (m1, rank))
        model = CpModel(a=a, b=b, c=c)
        recorder.block('A', model)

        ha = h @ a
        mc = np.einsum('njp,pr->njr', m, c)
        b = solve_block(report, 'B', ha[:, None, :] * mc, y, cfg.gamma, (m2, rank))
        model = CpModel(a=a, b=b, c=c)
        recorder.block('B', model)

        mb = np.einsum('njp,jr->npr', m, b)
        c = solve_block(report, 'C', ha[:, None, :] * mb, y, cfg.gamma, (p, rank))
        model = CpModel(a=a, b=b, c=c)
        recorder.block('C', model)

        recorder.end_sweep(model)

    report.wall_time = time.perf_counter() - tic
    report.model = model
    logger.info("cp R=%d on %s (N=%d): train nmse %.2f dB after %d sweeps",
                rank, design.dims, n, report.nmse_trace[-1], cfg.iterations)
    return model, report
