"""
Randomized decompositions: STHOSVD and mode-2/3 projections
"""

from .sthosvd import DEFAULT_OVERSAMPLE, DEFAULT_POWER, randomized_sthosvd, reconstruct
from .projection import (
    ProjectionPair,
    exact_project_modes_23,
    load_projection,
    project_modes_23,
    save_projection,
)

__all__ = [
    'DEFAULT_OVERSAMPLE',
    'DEFAULT_POWER',
    'randomized_sthosvd',
    'reconstruct',
    'ProjectionPair',
    'project_modes_23',
    'exact_project_modes_23',
    'save_projection',
    'load_projection',
]
