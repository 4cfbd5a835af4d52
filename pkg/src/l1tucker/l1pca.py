"""L1-norm principal component analysis.

Given a data matrix ``x`` (columns are observations) and a target rank ``d``,
L1-PCA seeks the orthonormal basis U maximizing ``||U^T x||_1``, the robust
counterpart of the squared-Frobenius objective of classical PCA.

Two solvers are provided:

* :func:`l1pca_ao` - alternating optimization with the fixed-point update
  ``U <- polar_factor(x @ sign_matrix(x.T @ U))``. The metric is
  non-decreasing across iterations, so the iteration converges.
* :func:`l1pca_exact` - exhaustive search over all sign matrices
  B in {-1,+1}^(cols x d), maximizing the nuclear norm ``||x @ B||_*``; the
  optimal basis is the polar factor of ``x @ B``. The attained L1 metric
  equals the maximal nuclear norm, which makes this an independent oracle
  for small instances.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import defaults
from .linalg import nuclear_norm, polar_factor, sign_matrix, dominant_left_basis
from .tensor import l1_norm
from .validation import check_matrix, check_orthonormal

_EXACT_BUDGET_BITS = 24
_ENUM_CHUNK = 4096


@dataclass(frozen=True)
class L1PcaConfig:
    """Termination settings for the alternating solver.

    ``max_iters=None`` resolves to ``min(100 * n_rows, 1000)`` at call time.
    ``init='svd'`` replaces the supplied start basis by the dominant left
    singular basis of the data; ``'given'`` uses the start basis as passed.
    """

    tol: float = defaults.TOL
    max_iters: int | None = None
    init: str = "given"

    def __post_init__(self):
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.max_iters is not None and self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if self.init not in ("given", "svd"):
            raise ValueError(f"unknown init {self.init!r}")

    def resolve_max_iters(self, n_rows: int) -> int:
        if self.max_iters is not None:
            return self.max_iters
        return min(defaults.AO_ITER_FACTOR * n_rows, defaults.AO_ITER_CAP)


@dataclass
class L1PcaResult:
    """Solver output: basis, attained metric, and the per-iteration trace."""

    basis: np.ndarray
    metric: float
    trace: list[float] = field(default_factory=list)
    iterations: int = 0
    converged: bool = False
    b_opt: np.ndarray | None = None


def _metric(x: np.ndarray, u: np.ndarray) -> float:
    return l1_norm(u.T @ x)


def l1pca_ao(
    x: np.ndarray, u0: np.ndarray, config: L1PcaConfig | None = None
) -> L1PcaResult:
    """Alternating-optimization L1-PCA from start basis ``u0``.

    Iterates ``U <- polar_factor(x @ sign_matrix(x.T @ U))`` until the
    relative metric increase drops below ``config.tol`` (absolute fallback
    when the previous metric is zero) or the iteration cap is reached. The
    returned trace starts at the metric of the start basis and is
    non-decreasing up to rounding.
    """
    config = config or L1PcaConfig()
    x = check_matrix(x, name="x", require_finite=True)
    u = check_orthonormal(u0, name="u0")
    if u.shape[0] != x.shape[0]:
        raise ValueError(
            f"u0 has {u.shape[0]} rows but x has {x.shape[0]}"
        )
    if config.init == "svd":
        u = dominant_left_basis(x, u.shape[1])

    if not np.any(x):
        return L1PcaResult(
            basis=u.copy(), metric=0.0, trace=[0.0], iterations=0, converged=True
        )

    metric = _metric(x, u)
    trace = [metric]
    max_iters = config.resolve_max_iters(x.shape[0])
    converged = False
    iterations = 0
    for _ in range(max_iters):
        u = polar_factor(x @ sign_matrix(x.T @ u))
        iterations += 1
        new_metric = _metric(x, u)
        trace.append(new_metric)
        gain = new_metric - metric
        if metric == 0.0:
            stop = gain < defaults.ABS_TOL
        else:
            stop = gain / metric < config.tol
        metric = new_metric
        if stop:
            converged = True
            break
    return L1PcaResult(
        basis=u, metric=metric, trace=trace, iterations=iterations, converged=converged
    )


def _sign_batch(ks: np.ndarray, n_cols: int, rank: int) -> np.ndarray:
    """Decode enumeration indices into sign matrices, shape (len(ks), n_cols, rank).

    Bit ``j * n_cols + i`` of ``k`` drives entry (i, j): bit 0 means +1, so
    k=0 is the all-ones matrix and ascending k is lexicographic in the
    entries with the first column index fastest and +1 ordered before -1.
    """
    n_bits = n_cols * rank
    bits = (ks[:, None] >> np.arange(n_bits, dtype=np.int64)[None, :]) & 1
    return (1.0 - 2.0 * bits).reshape(len(ks), rank, n_cols).transpose(0, 2, 1)


def l1pca_exact(x: np.ndarray, rank: int) -> L1PcaResult:
    """Exact L1-PCA by exhausting all sign matrices (small instances only).

    The search space has ``2 ** (n_cols * rank)`` candidates and is limited
    to at most ``2 ** 24``. Ties are broken by the first candidate in the
    enumeration order of :func:`_sign_batch`. The result records the optimal
    sign matrix in ``b_opt``; the attained metric equals
    ``nuclear_norm(x @ b_opt)``.
    """
    x = check_matrix(x, name="x", require_finite=True)
    d1, d2 = x.shape
    rank = int(rank)
    if not 1 <= rank <= d1:
        raise ValueError(f"rank {rank} must lie in [1, {d1}]")
    n_bits = d2 * rank
    if n_bits > _EXACT_BUDGET_BITS:
        raise ValueError(
            f"exhaustive search needs 2^{n_bits} candidates, over the "
            f"2^{_EXACT_BUDGET_BITS} budget"
        )

    best_val = -np.inf
    best_k = 0
    total = 1 << n_bits
    for start in range(0, total, _ENUM_CHUNK):
        ks = np.arange(start, min(start + _ENUM_CHUNK, total), dtype=np.int64)
        prods = np.matmul(x, _sign_batch(ks, d2, rank))
        vals = np.linalg.svd(prods, compute_uv=False).sum(axis=1)
        i = int(np.argmax(vals))
        if vals[i] > best_val:
            best_val = float(vals[i])
            best_k = int(ks[i])

    b_opt = _sign_batch(np.array([best_k], dtype=np.int64), d2, rank)[0]
    basis = polar_factor(x @ b_opt)
    metric = _metric(x, basis)
    return L1PcaResult(
        basis=basis,
        metric=metric,
        trace=[metric],
        iterations=0,
        converged=True,
        b_opt=b_opt,
    )
