"""
Models Registry

Maps model kinds to their classes.
Add new model families here.
"""

from typing import Union

import numpy as np

from .complexity import check_ranks, flop_count, param_count
from .gmp import GmpModel
from .cp import CpModel
from .tt import TtModel
from .tucker import TuckerModel
from .files import load_model, read_model_document, save_model

AnyModel = Union[GmpModel, CpModel, TtModel, TuckerModel]

# Registry: kind -> model class
MODELS = {
    'gmp': GmpModel,
    'cp': CpModel,
    'tt': TtModel,
    'tucker': TuckerModel,
}


def get_model_class(kind: str):
    """Get model class by kind"""
    if kind not in MODELS:
        available = ', '.join(MODELS.keys())
        raise ValueError(f"Unknown model kind: '{kind}'. Available: {available}")
    return MODELS[kind]


def list_models():
    """List available model kinds"""
    return list(MODELS.keys())


def predict(model: AnyModel, design) -> np.ndarray:
    return model.predict(design)


def expand_to_gmp(model: AnyModel) -> GmpModel:
    """Full coefficient tensor S of any model family"""
    return model.expand()


__all__ = [
    'MODELS',
    'get_model_class',
    'list_models',
    'predict',
    'expand_to_gmp',
    'param_count',
    'flop_count',
    'check_ranks',
    'GmpModel',
    'CpModel',
    'TtModel',
    'TuckerModel',
    'load_model',
    'read_model_document',
    'save_model',
]
