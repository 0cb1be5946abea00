"""
Dataset: train/test design sets for GMP identification
"""

from .design import DesignSet, build_design, build_full_design, load_design, save_design

__all__ = ['DesignSet', 'build_design', 'build_full_design', 'load_design', 'save_design']
