"""
Model files

A model is stored as a JSON document plus one tensor container per factor:

    models/cp_r3.json          {"kind": "cp", "dims": [...], "ranks": [...],
                                "factors": {"a": "cp_r3.a.gmpt", ...}, "info": {...}}
    models/cp_r3.a.gmpt        tensor container (see src.tensor.container)

Factor paths are relative to the JSON document. Round trips are bit-exact.
"""

import json
from pathlib import Path
from typing import Optional, Union

from ..errors import ContainerError
from ..tensor import DenseTensor, container

FORMAT_VERSION = 1


def save_model(model, path: Union[str, Path], info: Optional[dict] = None) -> Path:
    path = Path(path).with_suffix('.json')
    path.parent.mkdir(parents=True, exist_ok=True)

    refs = {}
    for name, array in model.factors().items():
        ref = f"{path.stem}.{name}{container.SUFFIX}"
        container.save(DenseTensor.from_array(array), path.parent / ref)
        refs[name] = ref

    document = {
        'format_version': FORMAT_VERSION,
        'kind': model.kind,
        'dims': list(model.dims),
        'ranks': list(model.ranks),
        'factors': refs,
        'info': info or {},
    }
    path.write_text(json.dumps(document, indent=2, sort_keys=True) + "\n", encoding='utf-8')
    return path


def read_model_document(path: Union[str, Path]) -> dict:
    path = Path(path)
    try:
        return json.loads(path.read_text(encoding='utf-8'))
    except json.JSONDecodeError as e:
        raise ContainerError(f"{path}: invalid model document (line {e.lineno}, column {e.colno})") from e


def load_model(path: Union[str, Path]):
    # local import: the registry imports this module
    from . import get_model_class

    path = Path(path)
    document = read_model_document(path)
    try:
        cls = get_model_class(document['kind'])
        arrays = {
            name: container.load(path.parent / ref).array.copy()
            for name, ref in document['factors'].items()
        }
    except KeyError as e:
        raise ContainerError(f"{path}: model document is missing {e}") from e

    model = cls(**arrays)
    if list(model.dims) != list(document['dims']) or list(model.ranks) != list(document['ranks']):
        raise ContainerError(
            f"{path}: factor shapes give dims {model.dims} / ranks {model.ranks}, "
            f"document says {document['dims']} / {document['ranks']}"
        )
    return model
