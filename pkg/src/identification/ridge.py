"""
Full-GMP identification by ridge regression

    s = argmin ||y - X(1) s||^2 + gamma ||s||^2
      = (X(1)^H X(1) + gamma I)^{-1} X(1)^H y

X(1) is the mode-1 unfolding of the N x M1 x M2 x P regressor tensor.
Note the p = 0 columns repeat across j, so at gamma = 0 the system is only
full rank when M2 = 1; the minimum-norm solution is returned then.
"""

import logging
import time
from typing import Tuple

import numpy as np

from ..dataset import DesignSet
from ..metrics.nmse import nmse
from ..models import GmpModel
from ..tensor import unfold
from .common import FitReport, SolverConfig, residual_power, solve_regularized

logger = logging.getLogger(__name__)


def regressor_matrix(design: DesignSet) -> np.ndarray:
    """X(1): N x (M1 M2 P), column i + j*M1 + p*M1*M2"""
    return unfold(design.full_tensor(), 0)


def ridge_fit(design: DesignSet, cfg: SolverConfig) -> Tuple[GmpModel, FitReport]:
    cfg.validate()
    report = FitReport(solver='gmp-ls')
    tic = time.perf_counter()

    x1 = regressor_matrix(design)
    s, deficient = solve_regularized(x1, design.y, cfg.gamma)
    if deficient:
        report.warn(
            f"ridge problem with gamma=0 is rank deficient ({x1.shape[1]} columns); "
            "returning the minimum-norm solution"
        )
    model = GmpModel.from_vector(s, design.dims)

    report.wall_time = time.perf_counter() - tic
    report.iteration_times.append(report.wall_time)
    y_hat = x1 @ s
    fit = residual_power(design.y, y_hat)
    report.fit_trace.append(fit)
    report.objective_trace.append(fit + cfg.gamma * float(np.vdot(s, s).real))
    report.block_trace.append('s')
    report.nmse_trace.append(nmse(y_hat, design.y))
    report.model = model
    logger.info("gmp-ls %s gamma=%.3g: train nmse %.2f dB", design.dims, cfg.gamma, report.nmse_trace[-1])
    return model, report


def ridge_ls(design: DesignSet, gamma: float) -> GmpModel:
    return ridge_fit(design, SolverConfig(gamma=gamma, iterations=1))[0]
