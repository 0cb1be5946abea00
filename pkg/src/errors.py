"""
Exception hierarchy shared by every package module.

The CLI maps these onto process exit codes (see exit_code_for).
"""

import numpy as np


class GmpError(Exception):
    """Base class for library errors"""


class ConfigError(GmpError, ValueError):
    """Invalid or unknown configuration entry"""


class DimensionError(GmpError, ValueError):
    """Shape, rank or window mismatch"""


class NumericError(GmpError, ArithmeticError):
    """Non-finite input or a numerically failed solve"""


class ContainerError(GmpError, OSError):
    """Malformed binary tensor container"""


# Exit codes used by pipeline.py
EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_IO = 4


def exit_code_for(exc: BaseException) -> int:
    """Map an exception to the CLI exit code (1 for anything unexpected)"""
    if isinstance(exc, (NumericError, np.linalg.LinAlgError)):
        return EXIT_NUMERIC
    if isinstance(exc, OSError):
        return EXIT_IO
    # DimensionError and plain ValueError come from bad settings
    if isinstance(exc, ValueError):
        return EXIT_CONFIG
    return 1


def require_finite(array: np.ndarray, what: str) -> None:
    """Raise NumericError when array holds NaN or Inf"""
    if not np.all(np.isfinite(array)):
        raise NumericError(f"{what} contains non-finite values")
