import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)


def random_orthonormal(rng, n_rows, n_cols):
    q, r = np.linalg.qr(rng.standard_normal((n_rows, n_cols)))
    return q * np.where(np.diagonal(r) >= 0.0, 1.0, -1.0)
