"""
Model comparison and sweeps

Runs configured models end-to-end on shared data and seeds:

    compare_models      one EvalReport per configured model
    gamma_sweep         (solver, gamma, NMSE, nonzeros) for the GMP solvers
    rank_sweep          NMSE per CP rank
    rp_robustness       RP-ALS NMSE over independent sketch seeds
    convergence_traces  per-iteration NMSE of the ALS families and
                        FISTA vs PGD objective traces

Not imported by the package __init__ (it depends on identification, which
itself imports metrics.nmse).
"""

import dataclasses
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..config import ExperimentConfig, ModelSpec
from ..dataset import DesignSet, build_design
from ..identification import SOLVER_KINDS, get_solver, identify, lasso_fit
from ..signals import ofdm_generate
from .nmse import nmse, sparsity
from .report import EvalReport, evaluate_model

logger = logging.getLogger(__name__)

# ALS families and ranks used by the convergence and robustness runs
FAMILY_RANKS = {
    'cp': (3,),
    'tt': (2, 2),
    'tucker': (2, 2, 2),
}


@dataclass
class ExperimentData:
    """Input/output signals of one config plus cached design windows"""
    config: ExperimentConfig
    x: np.ndarray
    y: np.ndarray
    _designs: Dict[tuple, DesignSet] = field(default_factory=dict, repr=False)

    @classmethod
    def generate(cls, config: ExperimentConfig) -> 'ExperimentData':
        x = ofdm_generate(config.ofdm_config())
        y = config.reference_pa().apply(x, seed=config.component_seeds()['noise'])
        logger.info("generated %d samples (seed %d)", x.size, config.seed)
        return cls(config=config, x=x, y=y)

    def design(self, window: str, dims: Sequence[int]) -> DesignSet:
        key = (window, tuple(dims))
        if key not in self._designs:
            w = getattr(self.config.windows, window)
            m1, m2, p = dims
            design = build_design(self.x, self.y, w.t0, w.n, m1, m2, p)
            design.meta['window'] = window
            self._designs[key] = design
        return self._designs[key]

    def train(self, dims: Sequence[int]) -> DesignSet:
        return self.design('train', dims)

    def test(self, dims: Sequence[int]) -> DesignSet:
        return self.design('test', dims)


def fit_spec(data: ExperimentData, spec: ModelSpec):
    """Train one configured model; returns (model, FitReport)"""
    config = data.config
    config.validate_model(spec)
    projection = config.projection_target if spec.rp_als else None
    report = identify(
        data.train(spec.dims),
        spec.solver,
        config.solver_config(spec),
        ranks=tuple(spec.ranks),
        projection=projection,
    )
    return report.model, report


def compare_models(
    config: ExperimentConfig,
    data: Optional[ExperimentData] = None,
    dims: Optional[Sequence[int]] = None,
    repeats: Optional[int] = None,
) -> List[EvalReport]:
    """
    Train and score every configured model on shared data.

    `dims` overrides each model's (M1, M2, P) so one model list can be run
    for several GMP sizes.
    """
    data = data or ExperimentData.generate(config)
    repeats = repeats or config.bench.repeats
    reports = []
    for spec in config.models:
        if dims is not None:
            spec = dataclasses.replace(spec, dims=list(dims))
        model, fit = fit_spec(data, spec)
        is_sparse = spec.solver in ('gmp-lasso', 'gmp-pgd')
        report = evaluate_model(
            model, data.test(spec.dims), label=spec.label, fit_report=fit,
            repeats=repeats, count_nonzeros=is_sparse,
        )
        logger.info("%s %s: %.2f dB, %d params", spec.label, tuple(spec.dims), report.nmse_db, report.num_params)
        reports.append(report)
    return reports


def gamma_sweep(
    config: ExperimentConfig,
    data: Optional[ExperimentData] = None,
    dims: Optional[Sequence[int]] = None,
    gammas: Optional[Sequence[float]] = None,
    solvers: Optional[Sequence[str]] = None,
) -> List[dict]:
    """Rows (solver, gamma, nmse_db, nonzeros) for the full-GMP solvers"""
    data = data or ExperimentData.generate(config)
    dims = tuple(dims or config.bench.dims[0])
    gammas = list(gammas if gammas is not None else config.bench.gammas)
    solvers = list(solvers or config.bench.gamma_solvers)
    rows = []
    for solver in solvers:
        if SOLVER_KINDS.get(solver) != 'gmp':
            raise ValueError(f"gamma_sweep runs full-GMP solvers only, got '{solver}'")
        iterations = config.bench.lasso_iterations if solver != 'gmp-ls' else 1
        for gamma in gammas:
            spec = ModelSpec(solver=solver, dims=list(dims), gamma=float(gamma), iterations=iterations)
            model, _ = fit_spec(data, spec)
            y_hat = model.predict(data.test(dims))
            rows.append({
                'solver': solver,
                'gamma': float(gamma),
                'nmse_db': nmse(y_hat, data.test(dims).y),
                'nonzeros': sparsity(model)[0],
            })
    return rows


def rank_sweep(
    config: ExperimentConfig,
    data: Optional[ExperimentData] = None,
    dims: Optional[Sequence[int]] = None,
    ranks: Optional[Sequence[int]] = None,
    iterations: Optional[int] = None,
    gamma: float = 1e-4,
) -> List[dict]:
    """Rows (rank, nmse_db, num_params) for CP models of increasing rank"""
    data = data or ExperimentData.generate(config)
    dims = tuple(dims or config.bench.dims[0])
    ranks = list(ranks or config.bench.ranks)
    iterations = iterations or config.bench.rank_iterations
    rows = []
    for rank in ranks:
        spec = ModelSpec(solver='cp', dims=list(dims), ranks=[int(rank)], gamma=gamma, iterations=iterations)
        model, _ = fit_spec(data, spec)
        rows.append({
            'rank': int(rank),
            'nmse_db': nmse(model.predict(data.test(dims)), data.test(dims).y),
            'num_params': model.num_params(),
        })
    return rows


def sketch_seeds(base_seed: int, count: int) -> List[int]:
    children = np.random.SeedSequence(base_seed).spawn(count)
    return [int(child.generate_state(1)[0]) for child in children]


def rp_robustness(
    config: ExperimentConfig,
    data: Optional[ExperimentData] = None,
    dims: Optional[Sequence[int]] = None,
    kind: str = 'cp',
    ranks: Optional[Sequence[int]] = None,
    runs: Optional[int] = None,
    iterations: int = 3,
    gamma: float = 1e-4,
) -> List[dict]:
    """Rows (run, sketch_seed, nmse_db, approx_error): RP-ALS over independent sketches"""
    data = data or ExperimentData.generate(config)
    dims = tuple(dims or config.bench.dims[0])
    ranks = tuple(ranks or FAMILY_RANKS[kind])
    runs = runs or config.bench.rp_seeds
    base = config.component_seeds()['sketch']
    spec = ModelSpec(solver=kind, dims=list(dims), ranks=list(ranks), gamma=gamma, iterations=iterations, rp_als=True)
    config.validate_model(spec)
    solver_cfg = config.solver_config(spec)

    rows = []
    for run, seed in enumerate(sketch_seeds(base, runs)):
        cfg = dataclasses.replace(solver_cfg, sketch_seed=seed)
        report = identify(data.train(dims), kind, cfg, ranks=ranks, projection=config.projection_target)
        rows.append({
            'run': run,
            'sketch_seed': seed,
            'nmse_db': nmse(report.model.predict(data.test(dims)), data.test(dims).y),
            'approx_error': report.projection.approx_error,
        })
    return rows


def als_convergence(
    config: ExperimentConfig,
    data: Optional[ExperimentData] = None,
    dims: Optional[Sequence[int]] = None,
    iterations: int = 10,
    gamma: float = 1e-4,
) -> List[dict]:
    """Rows (family, iteration, nmse_db on test data) for cp/tt/tucker"""
    data = data or ExperimentData.generate(config)
    dims = tuple(dims or config.bench.dims[0])
    train, test = data.train(dims), data.test(dims)

    rows = []
    for family, ranks in FAMILY_RANKS.items():
        spec = ModelSpec(solver=family, dims=list(dims), ranks=list(ranks), gamma=gamma, iterations=1)
        cfg = config.solver_config(spec)
        init = None
        for it in range(1, iterations + 1):
            # one sweep at a time so each iterate can be scored on test data
            _, report = get_solver(family)(train, tuple(ranks), cfg, init=init)
            init = report.model.factors()
            rows.append({
                'family': family,
                'iteration': it,
                'nmse_db': nmse(report.model.predict(test), test.y),
            })
    return rows


def lasso_convergence(
    config: ExperimentConfig,
    data: Optional[ExperimentData] = None,
    dims: Optional[Sequence[int]] = None,
    gamma: Optional[float] = None,
    iterations: Optional[int] = None,
) -> List[dict]:
    """Rows (method, iteration, objective) for FISTA and plain PGD"""
    data = data or ExperimentData.generate(config)
    dims = tuple(dims or config.bench.dims[0])
    gammas = config.bench.gammas
    gamma = gamma if gamma is not None else gammas[len(gammas) // 2]
    iterations = iterations or config.bench.lasso_iterations
    spec = ModelSpec(solver='gmp-lasso', dims=list(dims), gamma=gamma, iterations=iterations)
    cfg = config.solver_config(spec)

    rows = []
    for method, accelerated in (('fista', True), ('pgd', False)):
        _, report = lasso_fit(data.train(dims), cfg, accelerated=accelerated)
        for it, value in enumerate(report.objective_trace, start=1):
            rows.append({'method': method, 'iteration': it, 'objective': value})
    return rows


def convergence_traces(
    config: ExperimentConfig,
    data: Optional[ExperimentData] = None,
    dims: Optional[Sequence[int]] = None,
    iterations: int = 10,
) -> Tuple[List[dict], List[dict]]:
    """(als_convergence rows, lasso_convergence rows) on shared data"""
    data = data or ExperimentData.generate(config)
    return (
        als_convergence(config, data, dims, iterations),
        lasso_convergence(config, data, dims),
    )
