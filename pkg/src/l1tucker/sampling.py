"""Reproducible random sampling for experiments and randomized inits.

Streams
-------
Every random quantity is drawn from a counter-based Philox generator keyed
by ``(seed, trial, stream)`` through :func:`stream_rng`, so any trial of any
experiment can be regenerated in isolation and all solvers compared on a
trial see bit-identical data. Stream ids:

* ``STREAM_DATA`` - synthetic signal content (cores, bases, images)
* ``STREAM_CORRUPT`` - dense noise, outlier positions and values, masks,
  consumed in a fixed documented order by each corruption routine
* ``STREAM_SPLIT`` - train/test sample selection

Gaussians are produced by the inverse-CDF transform applied to midpoint
uniforms ``(k + 0.5) / 2**53``: the integer draw is platform-independent
and the transform avoids the tails at 0 and 1.
"""
from __future__ import annotations

import numpy as np
from scipy.special import ndtri

STREAM_DATA = 0
STREAM_CORRUPT = 1
STREAM_SPLIT = 2


def stream_rng(seed: int, trial: int = 0, stream: int = STREAM_DATA) -> np.random.Generator:
    """Philox generator for the ``(seed, trial, stream)`` cell."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(trial), int(stream)))
    return np.random.Generator(np.random.Philox(ss))


def standard_normal(rng: np.random.Generator, size) -> np.ndarray:
    """Standard normals via the inverse CDF of midpoint uniforms."""
    k = rng.integers(0, 1 << 53, size=size, dtype=np.uint64)
    u = (k.astype(np.float64) + 0.5) * (1.0 / (1 << 53))
    return ndtri(u)


def haar_basis(rng: np.random.Generator, n_rows: int, n_cols: int) -> np.ndarray:
    """Column-orthonormal basis distributed by Gaussian orthonormalization."""
    if n_cols > n_rows:
        raise ValueError(f"cannot draw {n_cols} orthonormal columns in R^{n_rows}")
    g = standard_normal(rng, (n_rows, n_cols))
    q, r = np.linalg.qr(g)
    return q * np.where(np.diagonal(r) >= 0.0, 1.0, -1.0)
