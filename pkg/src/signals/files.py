"""
Signal file I/O

The extension picks the format:
    .csv   header `t,re,im`, one sample per row (17 significant digits)
    .gmpt  order-1 tensor container
"""

from pathlib import Path
from typing import Union

import numpy as np

from ..errors import ContainerError
from ..tensor import DenseTensor, container

CSV_HEADER = "t,re,im"
SIGNAL_FORMATS = ('.csv', container.SUFFIX)


def _suffix(path: Path) -> str:
    suffix = path.suffix.lower()
    if suffix not in SIGNAL_FORMATS:
        raise ValueError(f"Unsupported signal file '{path.name}'. Use one of: {', '.join(SIGNAL_FORMATS)}")
    return suffix


def save_signal(x: np.ndarray, path: Union[str, Path]) -> Path:
    path = Path(path)
    suffix = _suffix(path)
    x = np.asarray(x, dtype=np.complex128).reshape(-1)
    path.parent.mkdir(parents=True, exist_ok=True)

    if suffix == '.csv':
        rows = np.column_stack([np.arange(x.size), x.real, x.imag])
        np.savetxt(path, rows, fmt=['%d', '%.17g', '%.17g'], delimiter=',',
                   header=CSV_HEADER, comments='')
    else:
        container.save(DenseTensor.from_array(x), path)
    return path


def load_signal(path: Union[str, Path]) -> np.ndarray:
    path = Path(path)
    suffix = _suffix(path)
    if suffix == '.csv':
        with open(path, 'r', encoding='utf-8') as f:
            header = f.readline().strip()
        if header != CSV_HEADER:
            raise ContainerError(f"{path}: expected header '{CSV_HEADER}', found '{header}'")
        rows = np.loadtxt(path, delimiter=',', skiprows=1, ndmin=2)
        return rows[:, 1] + 1j * rows[:, 2]

    t = container.load(path)
    if t.order != 1:
        raise ContainerError(f"{path}: signal containers must be order 1, found order {t.order}")
    return np.array(t.data, dtype=np.complex128)
