"""
ALS for the GMP-Tucker model

Core first, then the three factors:

    G:  K[n, r1, r2, r3] = (H A)[n, r1] * (M x2 B^T x3 C^T)[n, r2, r3]
    A:  D[n, i, r1]      = h[n, i] * sum_{r2 r3} G[r1, r2, r3] (M x2 B^T x3 C^T)[n, r2, r3]
    B:  E[n, j, r2]      = sum_{r1 r3} (H A)[n, r1] G[r1, r2, r3] (M x3 C^T)[n, j, r3]
    C:  F[n, p, r3]      = sum_{r1 r2} (H A)[n, r1] G[r1, r2, r3] (M x2 B^T)[n, p, r2]
"""

import logging
import time
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from ..dataset import DesignSet
from ..errors import DimensionError
from ..models import TuckerModel
from ..tensor import kron
from .common import FitReport, SolverConfig, SweepRecorder, initial_factors, solve_block

logger = logging.getLogger(__name__)


def als_tucker(
    design: DesignSet,
    ranks: Sequence[int],
    cfg: SolverConfig,
    init: Optional[Dict[str, np.ndarray]] = None,
) -> Tuple[TuckerModel, FitReport]:
    cfg.validate()
    ranks = tuple(int(r) for r in ranks)
    if len(ranks) != 3 or min(ranks) < 1:
        raise DimensionError(f"Tucker needs three ranks >= 1, got {ranks}")
    r1, r2, r3 = ranks
    m1, m2, p = design.dims
    n = design.n

    factors = init if init is not None else initial_factors('tucker', design.dims, ranks, cfg)
    g, a, b, c = factors['g'], factors['a'], factors['b'], factors['c']
    model = TuckerModel(g=g, a=a, b=b, c=c)
    if model.dims != design.dims or model.ranks != ranks:
        raise DimensionError(f"Initial Tucker factors {model.dims}/{model.ranks} do not match {design.dims}/{ranks}")

    report = FitReport(solver='tucker')
    recorder = SweepRecorder(report, design, cfg)
    h, m, mu, y = design.h, design.m.array, design.basis_matrix(), design.y
    tic = time.perf_counter()
    recorder.start(model)

    for _ in range(cfg.iterations):
        ha = h @ a
        mbc = (mu @ kron(c, b)).reshape(n, r2, r3, order='F')
        k = ha[:, :, None, None] * mbc[:, None, :, :]
        g = solve_block(report, 'G', k, y, cfg.gamma, (r1, r2, r3))
        model = TuckerModel(g=g, a=a, b=b, c=c)
        recorder.block('G', model)

        v = np.einsum('abc,nbc->na', g, mbc)
        a = solve_block(report, 'A', h[:, :, None] * v[:, None, :], y, cfg.gamma, (m1, r1))
        model = TuckerModel(g=g, a=a, b=b, c=c)
        recorder.block('A', model)

        t = np.einsum('na,abc->nbc', h @ a, g)
        mc = np.einsum('njp,pc->njc', m, c)
        e = np.einsum('nbc,njc->njb', t, mc)
        b = solve_block(report, 'B', e, y, cfg.gamma, (m2, r2))
        model = TuckerModel(g=g, a=a, b=b, c=c)
        recorder.block('B', model)

        mb = np.einsum('njp,jb->npb', m, b)
        f = np.einsum('nbc,npb->npc', t, mb)
        c = solve_block(report, 'C', f, y, cfg.gamma, (p, r3))
        model = TuckerModel(g=g, a=a, b=b, c=c)
        recorder.block('C', model)

        recorder.end_sweep(model)

    report.wall_time = time.perf_counter() - tic
    report.model = model
    logger.info("tucker R=%s on %s: train nmse %.2f dB after %d sweeps",
                ranks, design.dims, report.nmse_trace[-1], cfg.iterations)
    return model, report
