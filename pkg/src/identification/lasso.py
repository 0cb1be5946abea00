"""
Sparse GMP identification: LASSO by (accelerated) proximal gradient

    min_s  1/2 ||y - X s||^2 + gamma ||s||_1

Step size alpha = 1 / ||X||_2^2 (spectral norm by power iteration). Each step

    z_k = s_{k-1} + (k-2)/(k+1) (s_{k-1} - s_{k-2})      (FISTA; PGD: z_k = s_{k-1})
    w_k = z_k - alpha X^H (X z_k - y)
    s_k = soft(w_k, alpha gamma)

starting from s_0 = s_{-1} = 0. soft() is the complex-modulus soft threshold
and writes exact zeros.
"""

import logging
import time
from typing import Callable, List, Optional, Tuple

import numpy as np

from ..dataset import DesignSet
from ..metrics.nmse import nmse
from ..models import GmpModel
from .common import FitReport, SolverConfig
from .ridge import regressor_matrix

logger = logging.getLogger(__name__)

POWER_MAX_ITER = 200
POWER_TOL = 1e-6


def soft_threshold(w: np.ndarray, tau: float) -> np.ndarray:
    """w * max(|w| - tau, 0) / |w|, exactly zero where |w| <= tau"""
    magnitude = np.abs(w)
    out = np.zeros_like(w)
    keep = magnitude > tau
    out[keep] = w[keep] * (1.0 - tau / magnitude[keep])
    return out


def spectral_norm(x: np.ndarray, seed: Optional[int] = None,
                  max_iter: int = POWER_MAX_ITER, tol: float = POWER_TOL) -> float:
    """Largest singular value of x by power iteration on x^H x"""
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(x.shape[1]) + 1j * rng.standard_normal(x.shape[1])
    v /= np.linalg.norm(v)
    estimate = 0.0
    for _ in range(max_iter):
        w = x.conj().T @ (x @ v)
        value = float(np.linalg.norm(w))
        if value == 0.0:
            return 0.0
        v = w / value
        if abs(value - estimate) <= tol * value:
            estimate = value
            break
        estimate = value
    return float(np.sqrt(estimate))


def lasso_objective(x: np.ndarray, y: np.ndarray, s: np.ndarray, gamma: float) -> float:
    r = y - x @ s
    return 0.5 * float(np.vdot(r, r).real) + gamma * float(np.sum(np.abs(s)))


def proximal_gradient(
    x: np.ndarray,
    y: np.ndarray,
    gamma: float,
    iterations: int,
    accelerated: bool = True,
    seed: Optional[int] = None,
    on_step: Optional[Callable[[int, np.ndarray, np.ndarray], None]] = None,
) -> Tuple[np.ndarray, List[float]]:
    """
    Run `iterations` proximal-gradient steps.

    Returns the final coefficients and the objective after every step.
    on_step(k, s_k, residual_k) is called after each step.
    """
    if gamma < 0:
        raise ValueError(f"gamma must be >= 0, got {gamma}")
    if iterations < 1:
        raise ValueError(f"iterations must be >= 1, got {iterations}")

    norm = spectral_norm(x, seed=seed)
    cols = x.shape[1]
    if norm == 0.0:
        return np.zeros(cols, dtype=np.complex128), [lasso_objective(x, y, np.zeros(cols), gamma)] * iterations

    alpha = 1.0 / norm ** 2
    tau = alpha * gamma
    xh_y = x.conj().T @ y

    s_prev = np.zeros(cols, dtype=np.complex128)   # s_{k-2}
    s = np.zeros(cols, dtype=np.complex128)        # s_{k-1}
    trace = []
    for k in range(1, iterations + 1):
        if accelerated:
            z = s + ((k - 2) / (k + 1)) * (s - s_prev)
        else:
            z = s
        w = z - alpha * (x.conj().T @ (x @ z) - xh_y)
        s_prev, s = s, soft_threshold(w, tau)
        residual = y - x @ s
        trace.append(0.5 * float(np.vdot(residual, residual).real) + gamma * float(np.sum(np.abs(s))))
        if on_step is not None:
            on_step(k, s, residual)
    return s, trace


def lasso_fit(design: DesignSet, cfg: SolverConfig, accelerated: bool = True) -> Tuple[GmpModel, FitReport]:
    cfg.validate()
    name = 'gmp-lasso' if accelerated else 'gmp-pgd'
    report = FitReport(solver=name)
    tic = time.perf_counter()

    x1 = regressor_matrix(design)
    last = [tic]

    def record(k, s_k, residual):
        now = time.perf_counter()
        report.iteration_times.append(now - last[0])
        if cfg.record_objective:
            report.fit_trace.append(float(np.vdot(residual, residual).real))
            report.block_trace.append('s')
            report.nmse_trace.append(nmse(design.y - residual, design.y))
        last[0] = time.perf_counter()

    s, trace = proximal_gradient(x1, design.y, cfg.gamma, cfg.iterations, accelerated, cfg.seed, record)
    model = GmpModel.from_vector(s, design.dims)

    report.wall_time = time.perf_counter() - tic
    report.initial_objective = lasso_objective(x1, design.y, np.zeros(x1.shape[1]), cfg.gamma)
    if cfg.record_objective:
        report.objective_trace = trace
    else:
        report.nmse_trace.append(nmse(x1 @ s, design.y))
    report.model = model
    logger.info(
        "%s %s gamma=%.3g L=%d: %d nonzeros, train nmse %.2f dB",
        name, design.dims, cfg.gamma, cfg.iterations, int(np.count_nonzero(s)), report.nmse_trace[-1],
    )
    return model, report


def fista_lasso(design: DesignSet, gamma: float, iterations: int, seed: Optional[int] = None) -> GmpModel:
    return lasso_fit(design, SolverConfig(gamma=gamma, iterations=iterations, seed=seed))[0]


def pgd_lasso(design: DesignSet, gamma: float, iterations: int, seed: Optional[int] = None) -> GmpModel:
    return lasso_fit(design, SolverConfig(gamma=gamma, iterations=iterations, seed=seed), accelerated=False)[0]
