"""Matrix kernels with deterministic output conventions.

All factorizations follow one sign rule so downstream iterative solvers are
reproducible run-to-run: in each left singular vector the entry of largest
magnitude (lowest row index on ties) is nonnegative, and the paired right
singular vector absorbs the flip.
"""
from __future__ import annotations

import warnings
from typing import NamedTuple

import numpy as np

from . import defaults
from .validation import check_matrix


class RankDeficiencyWarning(UserWarning):
    """Emitted when a factorization input has lower numerical rank than requested."""


class ThinSVD(NamedTuple):
    """Compact SVD ``a = w @ diag(s) @ q.T`` with ``r = min(a.shape)`` terms."""

    w: np.ndarray
    s: np.ndarray
    q: np.ndarray


def thin_svd(a: np.ndarray) -> ThinSVD:
    """Thin SVD with singular values descending and the deterministic sign rule."""
    a = check_matrix(a, require_finite=True)
    w, s, qt = np.linalg.svd(a, full_matrices=False)
    q = qt.T
    # np.argmax returns the lowest index on ties, matching the sign rule.
    flip = w[np.argmax(np.abs(w), axis=0), np.arange(w.shape[1])] < 0
    w[:, flip] *= -1.0
    q[:, flip] *= -1.0
    return ThinSVD(w, s, q)


def numerical_rank(s: np.ndarray) -> int:
    """Count singular values above ``RANK_CUTOFF * s_max``."""
    if s.size == 0 or s[0] <= 0.0:
        return 0
    return int(np.count_nonzero(s > defaults.RANK_CUTOFF * s[0]))


def complete_basis(u: np.ndarray, rank: int) -> np.ndarray:
    """Deterministically extend orthonormal columns ``u`` to ``rank`` columns.

    Canonical coordinate axes are orthogonalized against the running basis in
    index order and appended whenever they keep a non-negligible residual.
    """
    d, k = u.shape
    if rank > d:
        raise ValueError(f"cannot build {rank} orthonormal columns in dimension {d}")
    cols = [u[:, j] for j in range(k)]
    for i in range(d):
        if len(cols) == rank:
            break
        v = np.zeros(d)
        v[i] = 1.0
        for c in cols:
            v -= (c @ v) * c
        norm = np.linalg.norm(v)
        if norm > 1e-6:
            cols.append(v / norm)
    if len(cols) < rank:
        raise RuntimeError(f"basis completion stalled at {len(cols)} of {rank} columns")
    return np.column_stack(cols)


def dominant_left_basis(a: np.ndarray, rank: int) -> np.ndarray:
    """The ``rank`` dominant left singular vectors of ``a``.

    Maximizes ``||U^T a||_F^2`` over orthonormal U. If the numerical rank of
    ``a`` falls short, the basis is padded by the deterministic completion of
    :func:`complete_basis`.
    """
    a = check_matrix(a, require_finite=True)
    rank = int(rank)
    if not 1 <= rank <= a.shape[0]:
        raise ValueError(f"rank {rank} must lie in [1, {a.shape[0]}]")
    w, s, _ = thin_svd(a)
    r_eff = min(rank, numerical_rank(s))
    if r_eff == rank:
        return w[:, :rank].copy()
    return complete_basis(w[:, :r_eff], rank)


def polar_factor(a: np.ndarray) -> np.ndarray:
    """Orthonormal polar factor ``w @ q.T`` of a tall matrix ``a``.

    Solves the orthogonal Procrustes problem: maximizes ``trace(U^T a)`` (and
    minimizes ``||U - a||_F``) over all U with orthonormal columns. When ``a``
    is rank deficient the factor is still orthonormal; the null-space columns
    come from the sign-convention SVD as-is and a :class:`RankDeficiencyWarning`
    flags the call.
    """
    a = check_matrix(a, require_finite=True)
    d, k = a.shape
    if k > d:
        raise ValueError(f"a must be tall, got shape {a.shape}")
    w, s, q = thin_svd(a)
    if numerical_rank(s) < k:
        warnings.warn(
            f"polar factor of a rank-deficient {d}x{k} matrix; "
            "null-space columns are a fixed deterministic completion",
            RankDeficiencyWarning,
            stacklevel=2,
        )
    return w @ q.T


def sign_matrix(a: np.ndarray) -> np.ndarray:
    """Entrywise signs in {-1, +1}; zero maps to +1."""
    a = np.asarray(a, dtype=np.float64)
    return np.where(a >= 0.0, 1.0, -1.0)


def nuclear_norm(a: np.ndarray) -> float:
    """Sum of singular values."""
    a = check_matrix(a, require_finite=True)
    return float(np.linalg.svd(a, compute_uv=False).sum())
