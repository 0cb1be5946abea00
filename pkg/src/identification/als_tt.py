"""
ALS for the GMP-TT model

Subproblems per sweep (A, core B, C):

    A:  D[n, i, r1]      = h[n, i] * sum_r2 (M x2 B[r1, :, r2] x3 C[r2, :])[n]
    B:  E[n, r1, j, r2]  = (H A)[n, r1] * (M x3 C)[n, j, r2]
    C:  F[n, r2, p]      = sum_r1 (H A)[n, r1] * (M x2 B[r1, :, r2])[n, p]
"""

import logging
import time
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from ..dataset import DesignSet
from ..errors import DimensionError
from ..models import TtModel
from .common import FitReport, SolverConfig, SweepRecorder, initial_factors, solve_block

logger = logging.getLogger(__name__)


def als_tt(
    design: DesignSet,
    ranks: Sequence[int],
    cfg: SolverConfig,
    init: Optional[Dict[str, np.ndarray]] = None,
) -> Tuple[TtModel, FitReport]:
    cfg.validate()
    ranks = tuple(int(r) for r in ranks)
    if len(ranks) != 2 or min(ranks) < 1:
        raise DimensionError(f"TT needs two ranks >= 1, got {ranks}")
    r1, r2 = ranks
    m1, m2, p = design.dims

    factors = init if init is not None else initial_factors('tt', design.dims, ranks, cfg)
    a, bcore, c = factors['a'], factors['bcore'], factors['c']
    model = TtModel(a=a, bcore=bcore, c=c)
    if model.dims != design.dims or model.ranks != ranks:
        raise DimensionError(f"Initial TT cores {model.dims}/{model.ranks} do not match {design.dims}/{ranks}")

    report = FitReport(solver='tt')
    recorder = SweepRecorder(report, design, cfg)
    h, m, mu, y = design.h, design.m.array, design.basis_matrix(), design.y
    tic = time.perf_counter()
    recorder.start(model)

    for _ in range(cfg.iterations):
        v = mu @ model.mode23_weights()
        a = solve_block(report, 'A', h[:, :, None] * v[:, None, :], y, cfg.gamma, (m1, r1))
        model = TtModel(a=a, bcore=bcore, c=c)
        recorder.block('A', model)

        ha = h @ a
        mc = np.einsum('njp,bp->njb', m, c)
        e = ha[:, :, None, None] * mc[:, None, :, :]
        bcore = solve_block(report, 'B', e, y, cfg.gamma, (r1, m2, r2))
        model = TtModel(a=a, bcore=bcore, c=c)
        recorder.block('B', model)

        t = np.einsum('na,ajb->njb', ha, bcore)
        f = np.einsum('njb,njp->nbp', t, m)
        c = solve_block(report, 'C', f, y, cfg.gamma, (r2, p))
        model = TtModel(a=a, bcore=bcore, c=c)
        recorder.block('C', model)

        recorder.end_sweep(model)

    report.wall_time = time.perf_counter() - tic
    report.model = model
    logger.info("tt R=%s on %s: train nmse %.2f dB after %d sweeps",
                ranks, design.dims, report.nmse_trace[-1], cfg.iterations)
    return model, report
