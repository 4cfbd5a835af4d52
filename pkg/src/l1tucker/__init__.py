"""Robust Tucker decomposition with L1-norm solvers.

Functional API: :func:`hosvd`, :func:`hooi`, :func:`l1_hosvd`,
:func:`l1_hooi`, plus the L1-PCA building blocks. Estimator API
(scikit-learn conventions): :class:`HOSVD`, :class:`HOOI`,
:class:`L1HOSVD`, :class:`L1HOOI`, :class:`L1PCA`.
"""
from .decomposition import (
    DecompTrace,
    HooiConfig,
    TuckerModel,
    hooi,
    hosvd,
    l1_hooi,
    l1_hosvd,
    projected_unfolding,
    reconstruct,
    tucker_metric_l1,
    tucker_metric_l2,
)
from .estimators import HOOI, HOSVD, L1HOOI, L1HOSVD, L1PCA
from .l1pca import L1PcaConfig, L1PcaResult, l1pca_ao, l1pca_exact
from .linalg import (
    RankDeficiencyWarning,
    ThinSVD,
    dominant_left_basis,
    nuclear_norm,
    polar_factor,
    sign_matrix,
    thin_svd,
)
from .lt1 import Lt1FormatError, read_model, read_tensor, write_model, write_tensor
from .tensor import (
    fold,
    frobenius_norm,
    l1_norm,
    mode_product,
    multi_mode_product,
    unfold,
)

__version__ = "0.1.0"

__all__ = [
    "DecompTrace",
    "HOOI",
    "HOSVD",
    "HooiConfig",
    "L1HOOI",
    "L1HOSVD",
    "L1PCA",
    "L1PcaConfig",
    "L1PcaResult",
    "Lt1FormatError",
    "RankDeficiencyWarning",
    "ThinSVD",
    "TuckerModel",
    "dominant_left_basis",
    "fold",
    "frobenius_norm",
    "hooi",
    "hosvd",
    "l1_hooi",
    "l1_hosvd",
    "l1_norm",
    "l1pca_ao",
    "l1pca_exact",
    "mode_product",
    "multi_mode_product",
    "nuclear_norm",
    "polar_factor",
    "projected_unfolding",
    "read_model",
    "read_tensor",
    "reconstruct",
    "sign_matrix",
    "thin_svd",
    "tucker_metric_l1",
    "tucker_metric_l2",
    "unfold",
    "write_model",
    "write_tensor",
]
