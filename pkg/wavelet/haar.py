"""
Orthonormal Haar analysis on [0, 1].

Sign convention: psi = 1 on [0, 1/2) and -1 on [1/2, 1), so the two-point
transform of [a, b] has detail (a - b)/sqrt(2). This is PyWavelets' 'haar'
filter pair; periodization mode keeps the transform orthonormal for 2^J samples.

A tree with max level m describes a function that is piecewise constant on
2^{m+1} cells; its discrete synthesis has 2^{m+1} samples equal to the cell
values times 2^{-(m+1)/2}.
"""
from __future__ import annotations

import numpy as np
import pywt

from domain.models import CoefficientTree, dyadic_exponent, is_power_of_two
from errors import SizingError, StructureError

_WAVELET = "haar"
_MODE = "periodization"


def _check_dyadic(size: int, what: str) -> int:
    if not is_power_of_two(size):
        raise SizingError(f"{what} must be a power of two, got {size}")
    return dyadic_exponent(size)


def _check_levels(levels: list[np.ndarray]) -> None:
    if not levels:
        raise StructureError("empty coefficient tree")
    for i, level in enumerate(levels):
        expected = 1 if i == 0 else 2 ** (i - 1)
        if np.shape(level) != (expected,):
            raise StructureError(f"level {i - 1} has shape {np.shape(level)}, expected ({expected},)")


def analyze(samples) -> CoefficientTree:
    """Discrete orthonormal Haar transform of 2^J samples (levels -1..J-1)."""
    x = np.asarray(samples, dtype=float).reshape(-1)
    J = _check_dyadic(x.size, "sample count")
    if J == 0:
        return CoefficientTree(levels=[x.copy()])
    return CoefficientTree(levels=pywt.wavedec(x, _WAVELET, mode=_MODE, level=J))


def synthesize(tree: CoefficientTree) -> np.ndarray:
    """Inverse of :func:`analyze`; returns 2^{max_level+1} samples."""
    levels = list(tree.levels)
    _check_levels(levels)
    if len(levels) == 1:
        return np.array(levels[0], dtype=float)
    return pywt.waverec(levels, _WAVELET, mode=_MODE)


def evaluate_expansion(tree: CoefficientTree, grid_size: int) -> np.ndarray:
    """Values of sum d_{j,k} psi_{j,k} at the midpoints of a uniform grid.

    Exact for every grid_size >= 2^max_level; on the coarsest admissible grid
    the midpoints fall on finest-level sign changes and take the right limit.
    """
    J = _check_dyadic(grid_size, "grid size")
    if J < tree.max_level:
        raise SizingError(f"grid of {grid_size} points is coarser than 2^{tree.max_level}")
    fine_size = 2 ** (tree.max_level + 1)
    fine = synthesize(tree) * np.sqrt(fine_size)
    idx = ((2 * np.arange(grid_size) + 1) * fine_size) // (2 * grid_size)
    return fine[idx]


def resize_tree(tree: CoefficientTree, max_level: int) -> CoefficientTree:
    """Truncate, or zero-extend, a tree to ``max_level``."""
    levels = [np.array(level) for level in tree.levels[: max_level + 2]]
    for j in range(tree.max_level + 1, max_level + 1):
        levels.append(np.zeros(2**j))
    return CoefficientTree(levels=levels, metadata=dict(tree.metadata))
