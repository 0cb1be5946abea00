"""
Accuracy and sparsity measures
"""

from typing import Tuple

import numpy as np

from ..errors import DimensionError

# value reported for an exact match (keeps CSV columns numeric)
NMSE_FLOOR_DB = -300.0


def nmse(y_model, y_test) -> float:
    """10 log10(||y_model - y_test||^2 / ||y_test||^2) in dB"""
    y_model = np.asarray(y_model).reshape(-1)
    y_test = np.asarray(y_test).reshape(-1)
    if y_model.size != y_test.size:
        raise DimensionError(f"NMSE needs equal lengths, got {y_model.size} and {y_test.size}")
    reference = float(np.vdot(y_test, y_test).real)
    if reference == 0:
        raise ValueError("NMSE is undefined for an all-zero test signal")
    diff = y_model - y_test
    error = float(np.vdot(diff, diff).real)
    if error == 0:
        return NMSE_FLOOR_DB
    return max(10.0 * np.log10(error / reference), NMSE_FLOOR_DB)


def sparsity(model, tol: float = 0.0) -> Tuple[int, float]:
    """(count, fraction) of full-GMP coefficients with modulus above tol"""
    if tol < 0:
        raise ValueError(f"tol must be >= 0, got {tol}")
    s = model.expand().s
    nonzeros = int(np.count_nonzero(np.abs(s) > tol))
    return nonzeros, nonzeros / s.size
