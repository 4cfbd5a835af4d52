"""Scikit-learn style estimators wrapping the functional solvers.

The Tucker estimators fit per-mode orthonormal bases to a single dense
tensor; ``transform`` projects a conforming tensor to its core (shape =
``ranks``) and ``inverse_transform`` expands a core back to the full space.
``L1PCA`` follows the matrix-decomposition convention of ``sklearn``:
rows of ``X`` are samples, ``components_`` has shape
``(n_components, n_features)``.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from . import defaults
from .decomposition import HooiConfig, hooi, hosvd, l1_hooi, l1_hosvd
from .l1pca import L1PcaConfig, l1pca_ao, l1pca_exact
from .linalg import dominant_left_basis
from .sampling import haar_basis, stream_rng
from .validation import check_matrix, check_ranks, check_tensor


class _BaseTucker(TransformerMixin, BaseEstimator):
    """Shared fit/transform plumbing for the four Tucker estimators."""

    def __init__(self, ranks=None):
        self.ranks = ranks

    def _decompose(self, x, ranks):
        raise NotImplementedError

    def fit(self, X, y=None):
        """Fit per-mode bases to the tensor ``X``.

        Parameters
        ----------
        X : ndarray
            Dense real tensor of any order >= 1.
        y : ignored

        Returns
        -------
        self
        """
        x = check_tensor(X, name="X")
        ranks = check_ranks(self.ranks if self.ranks is not None else x.shape, x.shape)
        model, trace = self._decompose(x, ranks)
        self.model_ = model
        self.bases_ = model.bases
        self.core_ = model.core
        self.ranks_ = model.ranks
        self.dims_ = model.dims
        if trace is not None:
            self.trace_ = trace
            self.n_iter_ = trace.iterations
            self.converged_ = trace.converged
        return self

    def transform(self, X):
        """Project ``X`` onto the fitted bases; the result has shape ``ranks_``."""
        check_is_fitted(self, "model_")
        x = check_tensor(X, name="X")
        if tuple(x.shape) != self.dims_:
            raise ValueError(f"X has shape {x.shape}, expected {self.dims_}")
        return self.model_.project(x)

    def inverse_transform(self, core):
        """Expand a core tensor of shape ``ranks_`` back to shape ``dims_``."""
        check_is_fitted(self, "model_")
        g = check_tensor(core, name="core")
        if tuple(g.shape) != self.ranks_:
            raise ValueError(f"core has shape {g.shape}, expected {self.ranks_}")
        return self.model_.expand(g)

    def reconstruct(self, X):
        """Low-multilinear-rank reconstruction of a conforming tensor."""
        return self.inverse_transform(self.transform(X))


class HOSVD(_BaseTucker):
    """Per-mode dominant singular bases of the mode unfoldings.

    Parameters
    ----------
    ranks : int, sequence of int, or None
        Target rank per mode; a scalar broadcasts, ``None`` keeps full ranks.
    """

    def _decompose(self, x, ranks):
        return hosvd(x, ranks), None


class HOOI(_BaseTucker):
    """Orthogonal-iteration refinement of the squared-Frobenius objective."""

    def __init__(self, ranks=None, *, tol=defaults.TOL, max_iter=defaults.MAX_OUTER_ITERS,
                 init=None, random_state=0):
        super().__init__(ranks)
        self.tol = tol
        self.max_iter = max_iter
        self.init = init
        self.random_state = random_state

    def _config(self):
        return HooiConfig(
            tol=self.tol, max_outer_iters=self.max_iter,
            init=self.init, seed=self.random_state,
        )

    def _decompose(self, x, ranks):
        return hooi(x, ranks, self._config())


class L1HOSVD(_BaseTucker):
    """Per-mode L1-PCA of the mode unfoldings, warm-started at HOSVD."""

    def __init__(self, ranks=None, *, tol=defaults.TOL, max_iter=None):
        super().__init__(ranks)
        self.tol = tol
        self.max_iter = max_iter

    def _decompose(self, x, ranks):
        return l1_hosvd(x, ranks, L1PcaConfig(tol=self.tol, max_iters=self.max_iter)), None


class L1HOOI(_BaseTucker):
    """Orthogonal-iteration refinement of the L1 objective (robust Tucker).

    Parameters
    ----------
    ranks : int, sequence of int, or None
        Target rank per mode; ``None`` keeps full ranks.
    tol : float
        Stop when the relative metric increase per sweep drops below this.
    max_iter : int
        Outer sweep cap.
    inner_tol, inner_max_iter : optional
        Subsolver settings; default to ``tol`` and the subsolver's own cap.
    init : {'l1-hosvd', 'hosvd', 'random', None}
        Warm start; ``None`` means 'l1-hosvd'.
    random_state : int
        Seed for ``init='random'``.
    """

    def __init__(self, ranks=None, *, tol=defaults.TOL, max_iter=defaults.MAX_OUTER_ITERS,
                 inner_tol=None, inner_max_iter=None, init=None, random_state=0):
        super().__init__(ranks)
        self.tol = tol
        self.max_iter = max_iter
        self.inner_tol = inner_tol
        self.inner_max_iter = inner_max_iter
        self.init = init
        self.random_state = random_state

    def _config(self):
        inner = L1PcaConfig(
            tol=self.inner_tol if self.inner_tol is not None else self.tol,
            max_iters=self.inner_max_iter,
        )
        return HooiConfig(
            tol=self.tol, max_outer_iters=self.max_iter, inner=inner,
            init=self.init, seed=self.random_state,
        )

    def _decompose(self, x, ranks):
        return l1_hooi(x, ranks, self._config())


class L1PCA(TransformerMixin, BaseEstimator):
    """L1-norm principal component analysis of a samples-by-features matrix.

    Parameters
    ----------
    n_components : int or None
        Number of components; ``None`` means ``min(n_samples, n_features)``.
    method : {'ao', 'exact'}
        Alternating optimization (default) or the exhaustive exact solver
        (tiny instances only).
    tol, max_iter : solver termination (AO only).
    n_restarts : int
        Extra AO runs from random orthonormal starts; the best metric wins.
    random_state : int
        Seed for the restart draws.
    """

    def __init__(self, n_components=None, *, method="ao", tol=defaults.TOL,
                 max_iter=None, n_restarts=0, random_state=0):
        self.n_components = n_components
        self.method = method
        self.tol = tol
        self.max_iter = max_iter
        self.n_restarts = n_restarts
        self.random_state = random_state

    def fit(self, X, y=None):
        X = check_matrix(np.asarray(X), name="X", require_finite=True)
        data = X.T  # features x samples
        k = self.n_components or min(X.shape)
        if not 1 <= k <= data.shape[0]:
            raise ValueError(f"n_components {k} must lie in [1, {data.shape[0]}]")

        if self.method == "exact":
            result = l1pca_exact(data, k)
        elif self.method == "ao":
            config = L1PcaConfig(tol=self.tol, max_iters=self.max_iter)
            result = l1pca_ao(data, dominant_left_basis(data, k), config)
            rng = stream_rng(self.random_state)
            for _ in range(self.n_restarts):
                start = haar_basis(rng, data.shape[0], k)
                candidate = l1pca_ao(data, start, config)
                if candidate.metric > result.metric:
                    result = candidate
        else:
            raise ValueError(f"unknown method {self.method!r}")

        self.components_ = result.basis.T
        self.metric_ = result.metric
        self.n_iter_ = result.iterations
        self.converged_ = result.converged
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        """Project samples onto the fitted components."""
        check_is_fitted(self, "components_")
        X = check_matrix(np.asarray(X), name="X")
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {X.shape[1]} features, expected {self.n_features_in_}")
        return X @ self.components_.T
