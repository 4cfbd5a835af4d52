"""Dense N-way tensor operations: unfolding, folding, mode products, norms.

Tensors are plain float64 ``numpy.ndarray`` objects. The canonical linear
order places the first index fastest (the column-major generalization), and
the mode-n unfolding arranges the mode-n fibers as columns so that, among
the remaining modes, earlier modes vary fastest. Concretely, entry
``X[i_0, ..., i_{N-1}]`` lands in row ``i_n`` and column

    j = sum over m != n of  i_m * J_m,
    J_m = product of D_k over k < m, k != n,

all zero-based. Mode indices in this API are zero-based; classical
one-based tensor notation shifts both modes and indices up by one.
"""
from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from .validation import check_mode, check_tensor


def unfold(x: np.ndarray, mode: int) -> np.ndarray:
    """Return the mode-``mode`` unfolding, shape ``(D_mode, prod(other dims))``.

    Columns are the mode fibers in the canonical order (earlier modes vary
    fastest along columns).
    """
    x = check_tensor(x)
    mode = check_mode(mode, x.ndim)
    return np.reshape(np.moveaxis(x, mode, 0), (x.shape[mode], -1), order="F")


def fold(m: np.ndarray, mode: int, shape: Sequence[int]) -> np.ndarray:
    """Invert :func:`unfold`: rebuild the tensor of ``shape`` from its unfolding."""
    m = np.asarray(m, dtype=np.float64)
    shape = tuple(int(d) for d in shape)
    mode = check_mode(mode, len(shape))
    rest = shape[:mode] + shape[mode + 1 :]
    expected = (shape[mode], int(np.prod(rest)) if rest else 1)
    if m.ndim != 2 or m.shape != expected:
        raise ValueError(
            f"unfolding has shape {m.shape}, expected {expected} for shape {shape}"
        )
    return np.moveaxis(np.reshape(m, (shape[mode],) + rest, order="F"), 0, mode)


def mode_product(x: np.ndarray, u: np.ndarray, mode: int) -> np.ndarray:
    """Multiply every mode-``mode`` fiber by ``u``; dimension D_mode becomes u.shape[0]."""
    x = check_tensor(x)
    u = np.asarray(u, dtype=np.float64)
    if u.ndim != 2:
        raise ValueError(f"u must be a matrix, got shape {u.shape}")
    mode = check_mode(mode, x.ndim)
    if u.shape[1] != x.shape[mode]:
        raise ValueError(
            f"u has {u.shape[1]} columns but mode {mode} has dimension {x.shape[mode]}"
        )
    new_shape = x.shape[:mode] + (u.shape[0],) + x.shape[mode + 1 :]
    return fold(u @ unfold(x, mode), mode, new_shape)


def multi_mode_product(
    x: np.ndarray,
    matrices: Sequence[np.ndarray],
    modes: Sequence[int] | None = None,
) -> np.ndarray:
    """Apply one matrix per distinct mode; ``modes`` defaults to 0..len(matrices)-1.

    Matrices are applied in ascending mode order (distinct modes commute, so
    the order only fixes floating-point rounding).
    """
    x = check_tensor(x)
    if modes is None:
        modes = list(range(len(matrices)))
    modes = [check_mode(n, x.ndim) for n in modes]
    if len(modes) != len(matrices):
        raise ValueError("need exactly one matrix per mode")
    if len(set(modes)) != len(modes):
        raise ValueError(f"duplicate modes in {modes}")
    out = x
    for mode, u in sorted(zip(modes, matrices), key=lambda pair: pair[0]):
        out = mode_product(out, u, mode)
    return out


def frobenius_norm(x: np.ndarray) -> float:
    """sqrt of the sum of squared entries."""
    return float(np.linalg.norm(np.asarray(x, dtype=np.float64).ravel()))


def l1_norm(x: np.ndarray) -> float:
    """Sum of absolute entries."""
    return float(np.sum(np.abs(np.asarray(x, dtype=np.float64))))
