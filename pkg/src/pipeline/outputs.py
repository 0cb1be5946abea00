"""
Output tree and manifests

    <out>/signals/       x and y signal files + manifest.json
    <out>/models/        model documents, factor containers, projections
    <out>/reports/       per-iteration training traces
    <out>/evaluations/   EvalReports of single models
    <out>/bench/         comparison tables and sweeps
    <out>/exports/       plot-ready CSVs
"""

import hashlib
import json
from pathlib import Path
from typing import Dict, Optional, Sequence, Union

from ..metrics import write_rows_csv

OUTPUT_DIRS = ('signals', 'models', 'reports', 'evaluations', 'bench', 'exports')
MANIFEST_NAME = 'manifest.json'


def output_dir(base: Union[str, Path], kind: str) -> Path:
    if kind not in OUTPUT_DIRS:
        raise ValueError(f"Unknown output directory: '{kind}'. Available: {', '.join(OUTPUT_DIRS)}")
    path = Path(base) / kind
    path.mkdir(parents=True, exist_ok=True)
    return path


def file_sha256(path: Union[str, Path]) -> str:
    digest = hashlib.sha256()
    with open(path, 'rb') as f:
        for chunk in iter(lambda: f.read(1 << 20), b''):
            digest.update(chunk)
    return digest.hexdigest()


def write_json(document: dict, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(document, indent=2, sort_keys=True) + "\n", encoding='utf-8')
    return path


def write_manifest(
    directory: Union[str, Path],
    command: str,
    config: dict,
    config_hash: str,
    seeds: Dict[str, int],
    files: Sequence[Path],
    extra: Optional[dict] = None,
) -> Path:
    """manifest.json echoing the resolved config, seeds and file digests"""
    directory = Path(directory)
    document = {
        'command': command,
        'config_hash': config_hash,
        'config': config,
        'seeds': seeds,
        'files': {Path(f).name: file_sha256(f) for f in files},
    }
    if extra:
        document.update(extra)
    return write_json(document, directory / MANIFEST_NAME)


def read_manifest(directory: Union[str, Path]) -> dict:
    path = Path(directory) / MANIFEST_NAME
    return json.loads(path.read_text(encoding='utf-8'))


def write_rows(rows: Sequence[dict], path: Union[str, Path], fmt: str = 'csv',
               columns: Optional[Sequence[str]] = None, header: Optional[dict] = None) -> Path:
    """Rows as CSV, or JSON ({"rows": [...]} plus an optional header)"""
    path = Path(path).with_suffix(f".{fmt}")
    if fmt == 'csv':
        return write_rows_csv(rows, path, columns)
    if fmt == 'json':
        return write_json({**(header or {}), 'rows': list(rows)}, path)
    raise ValueError(f"Unknown format: '{fmt}'. Available: csv, json")
