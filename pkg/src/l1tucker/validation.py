"""Input validation helpers shared by the public API."""
from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from . import defaults


def check_tensor(x, *, name: str = "x") -> np.ndarray:
    """Coerce to a float64 ndarray of dimension >= 1."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    if arr.size == 0:
        raise ValueError(f"{name} must be non-empty")
    return arr


def check_matrix(a, *, name: str = "a", require_finite: bool = False) -> np.ndarray:
    arr = np.asarray(a, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be a 2-d array, got shape {arr.shape}")
    if require_finite and not np.isfinite(arr).all():
        raise ValueError(f"{name} must contain only finite entries")
    return arr


def check_mode(mode: int, ndim: int) -> int:
    mode = int(mode)
    if not 0 <= mode < ndim:
        raise ValueError(f"mode {mode} out of range for a {ndim}-way tensor")
    return mode


def check_ranks(ranks, shape: Sequence[int]) -> tuple[int, ...]:
    """Validate one target rank per mode, each within its mode dimension."""
    if np.isscalar(ranks):
        ranks = [int(ranks)] * len(shape)
    ranks = tuple(int(r) for r in ranks)
    if len(ranks) != len(shape):
        raise ValueError(
            f"expected {len(shape)} ranks (one per mode), got {len(ranks)}"
        )
    for n, (r, d) in enumerate(zip(ranks, shape)):
        if not 1 <= r <= d:
            raise ValueError(f"rank {r} for mode {n} must lie in [1, {d}]")
    return ranks


def check_orthonormal(u, *, name: str = "u") -> np.ndarray:
    """Validate a matrix with orthonormal columns (a Stiefel point)."""
    arr = check_matrix(u, name=name)
    d, r = arr.shape
    if r > d:
        raise ValueError(f"{name} must be tall, got shape {arr.shape}")
    gram_err = np.max(np.abs(arr.T @ arr - np.eye(r)))
    if gram_err > defaults.ORTHONORMAL_TOL:
        raise ValueError(
            f"{name} does not have orthonormal columns "
            f"(max |U^T U - I| = {gram_err:.3e})"
        )
    return arr
