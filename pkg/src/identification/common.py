"""
Shared solver plumbing: settings, run reports, regularized least squares,
seeded initialization and the ALS sweep recorder.
"""

import logging
import time
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg as la

from ..dataset import DesignSet
from ..decomposition import DEFAULT_OVERSAMPLE, DEFAULT_POWER
from ..errors import ConfigError, NumericError, require_finite
from ..metrics.nmse import nmse

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SolverConfig:
    """Settings shared by every solver"""
    gamma: float = 1e-4          # penalty weight
    iterations: int = 10         # L: ALS sweeps or proximal-gradient steps
    seed: Optional[int] = None   # initialization (ALS) / power-iteration start (LASSO)
    init_scale: float = 0.1
    record_objective: bool = True
    oversample: int = DEFAULT_OVERSAMPLE   # RP-ALS sketch
    power: int = DEFAULT_POWER
    sketch_seed: Optional[int] = None

    def validate(self) -> None:
        if not (np.isfinite(self.gamma) and self.gamma >= 0):
            raise ConfigError(f"gamma must be a finite value >= 0, got {self.gamma!r}")
        if int(self.iterations) != self.iterations or self.iterations < 1:
            raise ConfigError(f"iterations must be an integer >= 1, got {self.iterations!r}")
        if not self.init_scale > 0:
            raise ConfigError(f"init_scale must be positive, got {self.init_scale!r}")
        if self.oversample < 0 or self.power < 1:
            raise ConfigError(f"need oversample >= 0 and power >= 1, got {self.oversample}, {self.power}")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class FitReport:
    """Traces and timings of one identification run"""
    solver: str
    model: object = None
    objective_trace: List[float] = field(default_factory=list)   # per subproblem (ALS) or step
    fit_trace: List[float] = field(default_factory=list)         # ||y - y_hat||^2 alongside
    block_trace: List[str] = field(default_factory=list)
    nmse_trace: List[float] = field(default_factory=list)        # per iteration, training data
    iteration_times: List[float] = field(default_factory=list)
    initial_objective: Optional[float] = None
    wall_time: float = 0.0
    hosvd_time: float = 0.0
    warnings: List[str] = field(default_factory=list)
    projection: object = None

    @property
    def rank_deficient(self) -> bool:
        return bool(self.warnings)

    @property
    def iterations(self) -> int:
        return len(self.nmse_trace)

    @property
    def blocks_per_iteration(self) -> int:
        return len(self.objective_trace) // max(self.iterations, 1)

    def warn(self, message: str) -> None:
        if message not in self.warnings:
            self.warnings.append(message)
            logger.warning(message)

    def rows(self, include_timings: bool = True) -> List[dict]:
        """
        One row per subproblem (or proximal step): iteration, block, objective,
        fit, plus nmse and elapsed_ms on the last row of every iteration.
        """
        per = self.blocks_per_iteration or 1
        rows = []
        for k, (obj, fit) in enumerate(zip(self.objective_trace, self.fit_trace)):
            it, pos = divmod(k, per)
            last = pos == per - 1 and it < len(self.nmse_trace)
            elapsed = sum(self.iteration_times[:it + 1]) * 1e3 if last and include_timings else None
            rows.append({
                'iteration': it + 1,
                'block': self.block_trace[k] if k < len(self.block_trace) else '',
                'objective': obj,
                'fit': fit,
                'nmse_db': self.nmse_trace[it] if last else None,
                'elapsed_ms': elapsed,
            })
        return rows


def solve_regularized(d: np.ndarray, y: np.ndarray, gamma: float) -> Tuple[np.ndarray, bool]:
    """
    argmin_x ||y - D x||^2 + gamma ||x||^2.

    gamma > 0: Cholesky on (D^H D + gamma I) x = D^H y.
    gamma = 0: minimum-norm least squares (SVD based); the flag reports a
    rank-deficient D.
    """
    require_finite(d, "subproblem matrix")
    cols = d.shape[1]
    if gamma > 0:
        gram = d.conj().T @ d
        gram[np.diag_indices(cols)] += gamma
        rhs = d.conj().T @ y
        try:
            factor = la.cho_factor(gram, lower=False, check_finite=False)
            return la.cho_solve(factor, rhs, check_finite=False), False
        except la.LinAlgError:
            logger.debug("Cholesky failed on a %dx%d system, using least squares", cols, cols)
            stacked = np.vstack([d, np.sqrt(gamma) * np.eye(cols)])
            padded = np.concatenate([y, np.zeros(cols, dtype=y.dtype)])
            return la.lstsq(stacked, padded, lapack_driver='gelsd', check_finite=False)[0], False

    x, _, rank, _ = la.lstsq(d, y, lapack_driver='gelsd', check_finite=False)
    if not np.all(np.isfinite(x)):
        raise NumericError("least-squares solve produced non-finite values")
    return x, rank < cols


def complex_gaussian(rng: np.random.Generator, shape: Sequence[int], scale: float) -> np.ndarray:
    shape = tuple(shape)
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def initial_factors(kind: str, dims: Sequence[int], ranks: Sequence[int], cfg: SolverConfig) -> Dict[str, np.ndarray]:
    """
    Seeded complex-Gaussian starting point.

    Draw order is fixed per family (cp: a, b, c; tt: a, bcore, c;
    tucker: g, a, b, c).
    """
    m1, m2, p = dims
    rng = np.random.default_rng(cfg.seed)

    def draw(*shape):
        return complex_gaussian(rng, shape, cfg.init_scale)

    if kind == 'cp':
        (r,) = ranks
        return {'a': draw(m1, r), 'b': draw(m2, r), 'c': draw(p, r)}
    if kind == 'tt':
        r1, r2 = ranks
        return {'a': draw(m1, r1), 'bcore': draw(r1, m2, r2), 'c': draw(r2, p)}
    if kind == 'tucker':
        r1, r2, r3 = ranks
        g = draw(r1, r2, r3)
        return {'g': g, 'a': draw(m1, r1), 'b': draw(m2, r2), 'c': draw(p, r3)}
    raise ValueError(f"No ALS initialization for model kind '{kind}'")


def penalty(gamma: float, arrays: Dict[str, np.ndarray]) -> float:
    return gamma * sum(float(np.vdot(a, a).real) for a in arrays.values())


def residual_power(y: np.ndarray, y_hat: np.ndarray) -> float:
    r = y - y_hat
    return float(np.vdot(r, r).real)


class SweepRecorder:
    """Collects per-subproblem objective values and per-sweep NMSE and timings"""

    def __init__(self, report: FitReport, design: DesignSet, cfg: SolverConfig):
        self.report = report
        self.design = design
        self.cfg = cfg
        self._sweep_start = 0.0
        self._bookkeeping = 0.0

    def start(self, model) -> None:
        if self.cfg.record_objective:
            y_hat = model.predict(self.design)
            self.report.initial_objective = (
                residual_power(self.design.y, y_hat) + penalty(self.cfg.gamma, model.factors())
            )
        self._sweep_start = time.perf_counter()
        self._bookkeeping = 0.0

    def block(self, name: str, model) -> None:
        if not self.cfg.record_objective:
            return
        # objective evaluation is excluded from the sweep time
        tic = time.perf_counter()
        fit = residual_power(self.design.y, model.predict(self.design))
        self.report.fit_trace.append(fit)
        self.report.objective_trace.append(fit + penalty(self.cfg.gamma, model.factors()))
        self.report.block_trace.append(name)
        self._bookkeeping += time.perf_counter() - tic

    def end_sweep(self, model) -> None:
        elapsed = time.perf_counter() - self._sweep_start - self._bookkeeping
        self.report.iteration_times.append(elapsed)
        value = nmse(model.predict(self.design), self.design.y)
        self.report.nmse_trace.append(value)
        logger.debug(
            "%s sweep %d: nmse %.3f dB (%.1f ms)",
            self.report.solver, len(self.report.nmse_trace), value, elapsed * 1e3,
        )
        self._sweep_start = time.perf_counter()
        self._bookkeeping = 0.0


def solve_block(report: FitReport, block: str, design_tensor: np.ndarray, y: np.ndarray,
                gamma: float, shape: Sequence[int]) -> np.ndarray:
    """One ALS subproblem: flatten N x ... coefficients, ridge solve, refold to `shape`"""
    vec, deficient = solve_regularized(flatten_rows(design_tensor), y, gamma)
    if deficient:
        report.warn(f"{report.solver}: rank-deficient {block} subproblem, using minimum-norm solution")
    return unflatten(vec, shape)


def unflatten(vec: np.ndarray, shape: Sequence[int]) -> np.ndarray:
    """Subproblem solution vector back to a factor (first index fastest)"""
    return np.asarray(vec).reshape(tuple(shape), order='F')


def flatten_rows(t: np.ndarray) -> np.ndarray:
    """N x d1 x ... -> N x (d1 ...) with the first trailing index fastest"""
    return t.reshape(t.shape[0], -1, order='F')
