"""
Solvers Registry

Maps solver names to identification routines. Every entry has the signature
    solver(design, ranks, cfg) -> (model, FitReport)
Add new solvers here.
"""

import logging
from typing import Optional, Sequence, Tuple

from ..dataset import DesignSet
from ..errors import DimensionError
from .common import FitReport, SolverConfig, initial_factors, solve_regularized
from .ridge import ridge_fit, ridge_ls
from .lasso import fista_lasso, lasso_fit, pgd_lasso, proximal_gradient, soft_threshold, spectral_norm
from .als_cp import als_cp
from .als_tt import als_tt
from .als_tucker import als_tucker
from .rp_als import back_substitute, project_factors, rotate_initial_factors, rp_als
from .bounds import BoundReport, check_projection_bound

logger = logging.getLogger(__name__)


def _no_ranks(name, ranks):
    if ranks:
        raise DimensionError(f"Solver '{name}' takes no ranks, got {tuple(ranks)}")


def _gmp_ls(design, ranks, cfg):
    _no_ranks('gmp-ls', ranks)
    return ridge_fit(design, cfg)


def _gmp_lasso(design, ranks, cfg):
    _no_ranks('gmp-lasso', ranks)
    return lasso_fit(design, cfg, accelerated=True)


def _gmp_pgd(design, ranks, cfg):
    _no_ranks('gmp-pgd', ranks)
    return lasso_fit(design, cfg, accelerated=False)


# Registry: name -> solver
SOLVERS = {
    'gmp-ls': _gmp_ls,
    'gmp-lasso': _gmp_lasso,
    'gmp-pgd': _gmp_pgd,
    'cp': als_cp,
    'tt': als_tt,
    'tucker': als_tucker,
}

# solver name -> model kind it produces
SOLVER_KINDS = {
    'gmp-ls': 'gmp',
    'gmp-lasso': 'gmp',
    'gmp-pgd': 'gmp',
    'cp': 'cp',
    'tt': 'tt',
    'tucker': 'tucker',
}


def get_solver(name: str):
    """Get solver by name"""
    if name not in SOLVERS:
        available = ', '.join(SOLVERS.keys())
        raise ValueError(f"Unknown solver: '{name}'. Available: {available}")
    return SOLVERS[name]


def list_solvers():
    """List available solver names"""
    return list(SOLVERS.keys())


def identify(
    design: DesignSet,
    solver: str,
    cfg: Optional[SolverConfig] = None,
    ranks: Sequence[int] = (),
    projection: Optional[Tuple[int, int]] = None,
) -> FitReport:
    """
    Run one identification. With `projection` = (M2~, P~) the ALS families
    go through rp_als; the report then carries the ProjectionPair.
    """
    cfg = cfg or SolverConfig()
    fn = get_solver(solver)
    ranks = tuple(ranks or ())
    if projection is not None:
        if SOLVER_KINDS[solver] == 'gmp':
            raise ValueError(f"Solver '{solver}' does not support random projections")
        _, report, _ = rp_als(design, solver, ranks, tuple(projection), cfg)
        return report
    _, report = fn(design, ranks, cfg)
    return report


__all__ = [
    'SOLVERS',
    'SOLVER_KINDS',
    'get_solver',
    'list_solvers',
    'identify',
    'SolverConfig',
    'FitReport',
    'initial_factors',
    'solve_regularized',
    'ridge_fit',
    'ridge_ls',
    'lasso_fit',
    'fista_lasso',
    'pgd_lasso',
    'proximal_gradient',
    'soft_threshold',
    'spectral_norm',
    'als_cp',
    'als_tt',
    'als_tucker',
    'rp_als',
    'back_substitute',
    'rotate_initial_factors',
    'project_factors',
    'BoundReport',
    'check_projection_bound',
]
