"""
Randomized-projection ALS

1. Truncate modes 2 and 3 of the basis tensor: M ~ M~ x2 U2 x3 U3.
2. Run the family's ALS on the projected design (M replaced by M~), whose
   B and C factors live in the reduced dimensions.
3. Map the factors back:
       cp, tucker:  B = U2 B~,  C = U3 C~
       tt:          core B = B~ x2 U2,  C = C~ U3^T
   A (and the Tucker core G) are unchanged.

The returned model therefore has the original (M1, M2, P) dims. On the
training data it predicts exactly what the projected model predicts on
M-hat = M~ x2 U2 x3 U3.
"""

import logging
import time
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from ..dataset import DesignSet
from ..decomposition import ProjectionPair, project_modes_23
from ..errors import DimensionError
from ..models import CpModel, TtModel, TuckerModel
from ..tensor import mode_product
from .als_cp import als_cp
from .als_tt import als_tt
from .als_tucker import als_tucker
from .common import SolverConfig, initial_factors

logger = logging.getLogger(__name__)

ALS_SOLVERS = {
    'cp': als_cp,
    'tt': als_tt,
    'tucker': als_tucker,
}


def back_substitute(model, pair: ProjectionPair):
    """Projected-dims model -> original-dims model"""
    u2, u3 = pair.u2, pair.u3
    if isinstance(model, CpModel):
        return CpModel(a=model.a, b=u2 @ model.b, c=u3 @ model.c)
    if isinstance(model, TtModel):
        return TtModel(a=model.a, bcore=mode_product(model.bcore, 1, u2).array, c=model.c @ u3.T)
    if isinstance(model, TuckerModel):
        return TuckerModel(g=model.g, a=model.a, b=u2 @ model.b, c=u3 @ model.c)
    raise ValueError(f"No back-substitution for {type(model).__name__}")


def project_factors(model, pair: ProjectionPair) -> Dict[str, np.ndarray]:
    """
    Original-dims model -> starting factors in the projected dims.

    The result predicts on the projected design exactly what `model`
    predicts on M-hat.
    """
    u2, u3 = pair.u2, pair.u3
    if isinstance(model, CpModel):
        return {'a': model.a, 'b': u2.T @ model.b, 'c': u3.T @ model.c}
    if isinstance(model, TtModel):
        return {'a': model.a, 'bcore': mode_product(model.bcore, 1, u2.T).array, 'c': model.c @ u3}
    if isinstance(model, TuckerModel):
        return {'g': model.g, 'a': model.a, 'b': u2.T @ model.b, 'c': u3.T @ model.c}
    raise ValueError(f"No projection of {type(model).__name__} factors")


def rp_als(
    design: DesignSet,
    kind: str,
    ranks: Sequence[int],
    proj: Tuple[int, int],
    cfg: SolverConfig,
    init: Optional[Dict[str, np.ndarray]] = None,
    pair: Optional[ProjectionPair] = None,
):
    """
    Identify a cp/tt/tucker model through a mode-2/3 projection.

    `init` holds starting factors in the projected dims. A precomputed
    `pair` skips the projection step.

    Returns (model in original dims, FitReport, ProjectionPair).
    """
    if kind not in ALS_SOLVERS:
        raise ValueError(f"Unknown ALS family: '{kind}'. Available: {', '.join(ALS_SOLVERS)}")
    cfg.validate()
    _, m2, p = design.dims
    if not (1 <= proj[0] <= m2 and 1 <= proj[1] <= p):
        raise DimensionError(f"Projection {tuple(proj)} exceeds the basis dims ({m2}, {p})")

    tic = time.perf_counter()
    if pair is None:
        pair = project_modes_23(design.m, tuple(proj), cfg.oversample, cfg.power, cfg.sketch_seed)
    elif pair.target != tuple(proj) or pair.dims != (m2, p):
        raise DimensionError(f"Projection pair {pair.dims}->{pair.target} does not match {(m2, p)}->{tuple(proj)}")
    hosvd_time = time.perf_counter() - tic

    projected = design.with_basis(pair.core)
    solver = ALS_SOLVERS[kind]
    small_model, report = solver(projected, tuple(ranks), cfg, init=init)

    model = back_substitute(small_model, pair)
    report.solver = f"rp-{kind}"
    report.model = model
    report.projection = pair
    report.hosvd_time = hosvd_time
    report.wall_time += hosvd_time
    logger.info(
        "rp-als %s: projection %s -> %s in %.1f ms, mean sweep %.2f ms",
        kind, (m2, p), pair.target, hosvd_time * 1e3,
        1e3 * float(np.mean(report.iteration_times)),
    )
    return model, report, pair


def projected_initial_factors(kind: str, design: DesignSet, ranks: Sequence[int],
                              proj: Tuple[int, int], cfg: SolverConfig) -> Dict[str, np.ndarray]:
    """Default starting point of rp_als (drawn in the projected dims)"""
    m1 = design.dims[0]
    return initial_factors(kind, (m1, proj[0], proj[1]), ranks, cfg)


def rotate_initial_factors(kind: str, factors: Dict[str, np.ndarray], pair: ProjectionPair) -> Dict[str, np.ndarray]:
    """Projected-dims starting factors expressed in the original dims"""
    cls = {'cp': CpModel, 'tt': TtModel, 'tucker': TuckerModel}[kind]
    return back_substitute(cls(**factors), pair).factors()
