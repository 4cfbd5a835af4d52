"""Tucker decomposers: HOSVD, HOOI, and their L1-norm counterparts.

All four estimate per-mode orthonormal bases ``U_n`` of target ranks
``d_n``. The classical pair maximizes the squared Frobenius norm of the
projected core ``X x_n U_n^T``; the L1 pair maximizes its entrywise L1 norm,
which resists sparse heavy corruption. HOSVD/L1-HOSVD treat modes
independently; HOOI/L1-HOOI refine all bases jointly with monotone sweeps.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import defaults
from .l1pca import L1PcaConfig, l1pca_ao
from .linalg import dominant_left_basis
from .sampling import haar_basis, stream_rng
from .tensor import frobenius_norm, l1_norm, mode_product, multi_mode_product, unfold
from .validation import check_ranks, check_tensor


@dataclass
class TuckerModel:
    """Per-mode orthonormal bases plus, optionally, the core of the fitted tensor."""

    bases: list[np.ndarray]
    core: np.ndarray | None = None

    @property
    def ranks(self) -> tuple[int, ...]:
        return tuple(b.shape[1] for b in self.bases)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(b.shape[0] for b in self.bases)

    def project(self, x: np.ndarray) -> np.ndarray:
        """Core of ``x`` under the model bases: ``x x_n U_n^T`` over all modes."""
        return multi_mode_product(x, [b.T for b in self.bases])

    def expand(self, core: np.ndarray) -> np.ndarray:
        """Map a core back to the full space: ``core x_n U_n`` over all modes."""
        return multi_mode_product(core, list(self.bases))

    def reconstruct(self, x: np.ndarray) -> np.ndarray:
        """Low-multilinear-rank reconstruction ``x x_n U_n U_n^T``."""
        return self.expand(self.project(x))


@dataclass(frozen=True)
class HooiConfig:
    """Settings for the orthogonal-iteration refiners.

    ``inner`` configures the per-mode L1-PCA subsolver (defaults to the outer
    tolerance). ``init=None`` picks the natural warm start: HOSVD for the
    classical refiner, L1-HOSVD for the L1 refiner. ``init='random'`` draws
    Gaussian-orthonormalized bases from ``seed``.
    """

    tol: float = defaults.TOL
    max_outer_iters: int = defaults.MAX_OUTER_ITERS
    inner: L1PcaConfig | None = None
    init: str | None = None
    seed: int = 0

    def __post_init__(self):
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.max_outer_iters < 1:
            raise ValueError("max_outer_iters must be >= 1")
        if self.init not in (None, "hosvd", "l1-hosvd", "random"):
            raise ValueError(f"unknown init {self.init!r}")

    def inner_config(self) -> L1PcaConfig:
        return self.inner if self.inner is not None else L1PcaConfig(tol=self.tol)


@dataclass
class DecompTrace:
    """Convergence audit for one refiner run.

    ``metrics[0]`` is the metric of the initial bases and ``metrics[q]`` the
    metric after outer sweep q. ``mode_metrics[q-1][n]`` records the inner
    objective ``||U_n^T A_n||`` right after mode n's update in sweep q
    (squared Frobenius for HOOI, L1 for L1-HOOI).
    """

    metrics: list[float] = field(default_factory=list)
    converged: bool = False
    iterations: int = 0
    mode_metrics: list[list[float]] = field(default_factory=list)


def tucker_metric_l2(x: np.ndarray, bases: list[np.ndarray]) -> float:
    """Squared Frobenius norm of the projected core ``x x_n U_n^T``."""
    return frobenius_norm(multi_mode_product(x, [b.T for b in bases])) ** 2


def tucker_metric_l1(x: np.ndarray, bases: list[np.ndarray]) -> float:
    """L1 norm (sum of absolute entries) of the projected core."""
    return l1_norm(multi_mode_product(x, [b.T for b in bases]))


def projected_unfolding(x: np.ndarray, bases: list[np.ndarray], mode: int) -> np.ndarray:
    """Unfold ``x`` at ``mode`` after projecting every other mode onto its basis.

    Products are taken cheapest-first (ascending basis width) purely for
    speed; distinct modes commute so the result is order-independent.
    """
    order = sorted(
        (m for m in range(x.ndim) if m != mode),
        key=lambda m: (bases[m].shape[1], m),
    )
    out = x
    for m in order:
        out = mode_product(out, bases[m].T, m)
    return unfold(out, mode)


def reconstruct(x: np.ndarray, model: TuckerModel) -> np.ndarray:
    """Reconstruction ``x x_n U_n U_n^T``, evaluated as project-then-expand."""
    x = check_tensor(x)
    if tuple(x.shape) != model.dims:
        raise ValueError(f"tensor shape {x.shape} does not match model dims {model.dims}")
    return model.reconstruct(x)


def _initial_bases(
    x: np.ndarray, ranks: tuple[int, ...], init: str, config: HooiConfig
) -> list[np.ndarray]:
    if init == "hosvd":
        return hosvd(x, ranks).bases
    if init == "l1-hosvd":
        return l1_hosvd(x, ranks, config.inner_config()).bases
    rng = stream_rng(config.seed)
    return [haar_basis(rng, d, r) for d, r in zip(x.shape, ranks)]


def _relative_increase(prev: float, cur: float) -> float | None:
    """Metric-increase ratio between consecutive sweeps; None when undefined."""
    if prev == 0.0:
        return None
    return (cur - prev) / prev


def hosvd(x: np.ndarray, ranks) -> TuckerModel:
    """Per-mode dominant left singular bases of the mode unfoldings."""
    x = check_tensor(x)
    ranks = check_ranks(ranks, x.shape)
    bases = [dominant_left_basis(unfold(x, n), r) for n, r in enumerate(ranks)]
    model = TuckerModel(bases)
    model.core = model.project(x)
    return model


def hooi(
    x: np.ndarray, ranks, config: HooiConfig | None = None
) -> tuple[TuckerModel, DecompTrace]:
    """Higher-order orthogonal iterations for the squared-Frobenius objective.

    Sweeps modes in increasing order; each update takes the dominant left
    basis of the unfolding of the tensor projected onto all other current
    bases. The metric is non-decreasing across sweeps; iteration stops when
    its relative increase falls below ``config.tol`` or at the sweep cap.
    """
    config = config or HooiConfig()
    x = check_tensor(x)
    ranks = check_ranks(ranks, x.shape)
    bases = _initial_bases(x, ranks, config.init or "hosvd", config)

    trace = DecompTrace(metrics=[tucker_metric_l2(x, bases)])
    for _ in range(config.max_outer_iters):
        sweep = []
        for n, r in enumerate(ranks):
            a = projected_unfolding(x, bases, n)
            bases[n] = dominant_left_basis(a, r)
            sweep.append(frobenius_norm(bases[n].T @ a) ** 2)
        trace.mode_metrics.append(sweep)
        trace.iterations += 1
        trace.metrics.append(tucker_metric_l2(x, bases))
        ratio = _relative_increase(trace.metrics[-2], trace.metrics[-1])
        if ratio is None or ratio < config.tol:
            trace.converged = True
            break

    model = TuckerModel(bases)
    model.core = model.project(x)
    return model, trace


def l1_hosvd(x: np.ndarray, ranks, config: L1PcaConfig | None = None) -> TuckerModel:
    """Per-mode L1-PCA of the mode unfoldings, warm-started at the HOSVD bases.

    Modes are treated independently, so each returned basis attains an L1
    objective on its unfolding at least as large as its HOSVD start.
    """
    x = check_tensor(x)
    ranks = check_ranks(ranks, x.shape)
    config = config or L1PcaConfig()
    bases = []
    for n, r in enumerate(ranks):
        flat = unfold(x, n)
        u0 = dominant_left_basis(flat, r)
        bases.append(l1pca_ao(flat, u0, config).basis)
    model = TuckerModel(bases)
    model.core = model.project(x)
    return model


def l1_hooi(
    x: np.ndarray, ranks, config: HooiConfig | None = None
) -> tuple[TuckerModel, DecompTrace]:
    """Orthogonal-iteration refinement of the L1 objective.

    Each sweep visits modes in increasing order and re-solves the mode-n
    L1-PCA subproblem on the unfolding projected onto all other current
    bases, warm-starting from the previous mode-n basis. With the default
    L1-HOSVD initialization the final metric can only improve on L1-HOSVD.
    The outer trace is non-decreasing and bounded by
    ``sqrt(prod(ranks)) * ||x||_F``, so the sweeps converge; they stop when
    the relative metric increase drops below ``config.tol`` (immediately if
    the previous metric is zero) or at the sweep cap.
    """
    config = config or HooiConfig()
    x = check_tensor(x)
    ranks = check_ranks(ranks, x.shape)
    inner = config.inner_config()
    bases = _initial_bases(x, ranks, config.init or "l1-hosvd", config)

    trace = DecompTrace(metrics=[tucker_metric_l1(x, bases)])
    for _ in range(config.max_outer_iters):
        sweep = []
        for n in range(x.ndim):
            a = projected_unfolding(x, bases, n)
            bases[n] = l1pca_ao(a, bases[n], inner).basis
            sweep.append(l1_norm(bases[n].T @ a))
        trace.mode_metrics.append(sweep)
        trace.iterations += 1
        trace.metrics.append(tucker_metric_l1(x, bases))
        ratio = _relative_increase(trace.metrics[-2], trace.metrics[-1])
        if ratio is None or ratio < config.tol:
            trace.converged = True
            break

    model = TuckerModel(bases)
    model.core = model.project(x)
    return model, trace
