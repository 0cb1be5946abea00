"""
Numerical check of the projected-model error bounds

For a (near-)optimal unprojected model (A*, B*, C*) the best projected
model satisfies

    min ||y - y~|| <= ||y - y*|| + ||M - M-hat||_F * sum_r ||H a*_r||_inf ||b*_r||_F ||c*_r||_F

(cp; tt sums over (r1, r2) with core fibers B*[r1, :, r2] and rows C*[r2, :];
tucker weights every (r1, r2, r3) term by |G*[r1, r2, r3]|).

The left side is the projected residual the solver reached.
projected_star_residual (the star model evaluated on M-hat) is reported
alongside it. RP-ALS started from `project_factors(star, pair)` at
gamma = 0 never ends above it.
"""

from dataclasses import dataclass

import numpy as np

from ..dataset import DesignSet
from ..decomposition import ProjectionPair
from ..models import CpModel, TtModel, TuckerModel

RELATIVE_SLACK = 1e-8


@dataclass(frozen=True)
class BoundReport:
    kind: str
    lhs: float
    rhs: float
    holds: bool
    attained_residual: float
    projected_star_residual: float
    unprojected_residual: float
    projection_error: float
    weight: float

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs


def _weight(model, ha: np.ndarray) -> float:
    ha_inf = np.max(np.abs(ha), axis=0)
    if isinstance(model, CpModel):
        return float(np.sum(
            ha_inf * np.linalg.norm(model.b, axis=0) * np.linalg.norm(model.c, axis=0)
        ))
    if isinstance(model, TtModel):
        fiber_norms = np.linalg.norm(model.bcore, axis=1)        # R1 x R2
        row_norms = np.linalg.norm(model.c, axis=1)              # R2
        return float(np.sum(ha_inf[:, None] * fiber_norms * row_norms[None, :]))
    if isinstance(model, TuckerModel):
        b_norms = np.linalg.norm(model.b, axis=0)
        c_norms = np.linalg.norm(model.c, axis=0)
        terms = np.abs(model.g) * ha_inf[:, None, None] * b_norms[None, :, None] * c_norms[None, None, :]
        return float(np.sum(terms))
    raise ValueError(f"No projection bound for {type(model).__name__}")


def check_projection_bound(
    kind: str,
    design: DesignSet,
    proj: ProjectionPair,
    star_model,
    projected_optimum_value: float,
) -> BoundReport:
    """
    Evaluate both sides of the bound.

    projected_optimum_value is the attained projected data-fit term
    ||y - y~||^2 (no penalty).
    """
    if star_model.kind != kind:
        raise ValueError(f"star model is '{star_model.kind}', expected '{kind}'")
    star_model.check_design(design)

    y = design.y
    unprojected = float(np.linalg.norm(y - star_model.predict(design)))
    m_hat = design.with_basis(proj.reconstruct())
    projected_star = float(np.linalg.norm(y - star_model.predict(m_hat)))
    attained = float(np.sqrt(max(projected_optimum_value, 0.0)))

    weight = _weight(star_model, design.h @ star_model.a)
    rhs = unprojected + proj.approx_error * weight
    lhs = attained
    return BoundReport(
        kind=kind,
        lhs=lhs,
        rhs=rhs,
        holds=lhs <= rhs + RELATIVE_SLACK * rhs,
        attained_residual=attained,
        projected_star_residual=projected_star,
        unprojected_residual=unprojected,
        projection_error=proj.approx_error,
        weight=weight,
    )
