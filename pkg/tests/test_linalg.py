import numpy as np
import pytest

from l1tucker.linalg import (
    RankDeficiencyWarning,
    complete_basis,
    dominant_left_basis,
    nuclear_norm,
    polar_factor,
    sign_matrix,
    thin_svd,
)
from l1tucker.tensor import frobenius_norm
from tests.conftest import random_orthonormal


def assert_orthonormal(u, tol=1e-10):
    assert np.max(np.abs(u.T @ u - np.eye(u.shape[1]))) <= tol


class TestThinSvd:
    def test_identity(self):
        w, s, q = thin_svd(np.eye(3))
        np.testing.assert_allclose(s, np.ones(3))

    def test_diagonal_case(self):
        w, s, q = thin_svd(np.diag([3.0, 2.0]))
        np.testing.assert_allclose(s, [3.0, 2.0])
        np.testing.assert_allclose(w, np.eye(2), atol=1e-14)
        np.testing.assert_allclose(q, np.eye(2), atol=1e-14)

    @pytest.mark.parametrize("shape", [(5, 3), (3, 5), (4, 4), (2, 20), (20, 2)])
    def test_reconstruction_and_energy(self, rng, shape):
        a = rng.standard_normal(shape)
        w, s, q = thin_svd(a)
        np.testing.assert_allclose(w @ np.diag(s) @ q.T, a, rtol=1e-9, atol=1e-9)
        assert abs(np.sum(s**2) - frobenius_norm(a) ** 2) <= 1e-9 * frobenius_norm(a) ** 2
        assert np.all(np.diff(s) <= 0)
        assert np.all(s >= 0)
        assert_orthonormal(w)
        assert_orthonormal(q)

    def test_sign_convention(self, rng):
        for _ in range(20):
            a = rng.standard_normal((6, 4))
            w, _, _ = thin_svd(a)
            peaks = w[np.argmax(np.abs(w), axis=0), np.arange(w.shape[1])]
            assert np.all(peaks >= 0)

    def test_deterministic(self, rng):
        a = rng.standard_normal((5, 4))
        r1, r2 = thin_svd(a), thin_svd(a.copy())
        np.testing.assert_array_equal(r1.w, r2.w)
        np.testing.assert_array_equal(r1.q, r2.q)

    def test_non_finite_rejected(self):
        with pytest.raises(ValueError):
            thin_svd(np.array([[1.0, np.nan], [0.0, 1.0]]))


class TestDominantLeftBasis:
    def test_diagonal(self):
        u = dominant_left_basis(np.diag([3.0, 2.0, 1.0]), 2)
        np.testing.assert_allclose(u, np.eye(3)[:, :2], atol=1e-14)

    def test_single_nonzero_row(self):
        a = np.zeros((4, 3))
        a[2] = [1.0, -2.0, 0.5]
        u = dominant_left_basis(a, 1)
        np.testing.assert_allclose(np.abs(u[:, 0]), np.eye(4)[:, 2], atol=1e-14)
        assert u[2, 0] > 0

    def test_captured_energy_matches_spectrum(self, rng):
        a = rng.standard_normal((6, 8))
        s = np.linalg.svd(a, compute_uv=False)
        for d in (1, 2, 4):
            u = dominant_left_basis(a, d)
            energy = frobenius_norm(u.T @ a) ** 2
            np.testing.assert_allclose(energy, np.sum(s[:d] ** 2), rtol=1e-9)

    def test_rank_too_large(self):
        with pytest.raises(ValueError):
            dominant_left_basis(np.zeros((3, 2)), 4)

    def test_rank_deficient_padding(self, rng):
        col = rng.standard_normal((5, 1))
        a = col @ np.ones((1, 3))
        u = dominant_left_basis(a, 3)
        assert u.shape == (5, 3)
        assert_orthonormal(u)
        np.testing.assert_allclose(
            np.abs(u[:, 0]), np.abs(col[:, 0]) / np.linalg.norm(col), atol=1e-12
        )
        np.testing.assert_array_equal(u, dominant_left_basis(a.copy(), 3))

    def test_zero_matrix(self):
        u = dominant_left_basis(np.zeros((4, 2)), 2)
        np.testing.assert_array_equal(u, np.eye(4)[:, :2])

    def test_wider_rank_than_columns(self, rng):
        a = rng.standard_normal((5, 2))
        u = dominant_left_basis(a, 4)
        assert u.shape == (5, 4)
        assert_orthonormal(u)


class TestPolarFactor:
    def test_fixes_orthonormal_input(self, rng):
        u = random_orthonormal(rng, 6, 3)
        np.testing.assert_allclose(polar_factor(u), u, atol=1e-12)

    def test_diagonal_by_inspection(self):
        np.testing.assert_allclose(polar_factor(np.diag([2.0, 3.0])), np.eye(2), atol=1e-14)

    def test_trace_optimality(self, rng):
        a = rng.standard_normal((7, 3))
        best = np.trace(polar_factor(a).T @ a)
        for _ in range(100):
            u = random_orthonormal(rng, 7, 3)
            assert best >= np.trace(u.T @ a) - 1e-9

    def test_output_orthonormal(self, rng):
        for _ in range(10):
            assert_orthonormal(polar_factor(rng.standard_normal((5, 4))))

    def test_rank_deficient_flagged_but_orthonormal(self, rng):
        a = rng.standard_normal((6, 1)) @ rng.standard_normal((1, 3))
        with pytest.warns(RankDeficiencyWarning):
            u = polar_factor(a)
        assert_orthonormal(u)

    def test_wide_input_rejected(self):
        with pytest.raises(ValueError):
            polar_factor(np.zeros((2, 3)))


class TestSignMatrix:
    def test_zero_maps_to_plus_one(self):
        np.testing.assert_array_equal(sign_matrix(np.array([[0.0]])), [[1.0]])

    def test_mixed(self):
        np.testing.assert_array_equal(sign_matrix(np.array([[-2.0, 5.0]])), [[-1.0, 1.0]])

    def test_idempotent(self, rng):
        a = rng.standard_normal((4, 5))
        np.testing.assert_array_equal(sign_matrix(sign_matrix(a)), sign_matrix(a))

    def test_negative_zero(self):
        # -0.0 compares equal to 0.0, so it also maps to +1.
        assert sign_matrix(np.array([[-0.0]]))[0, 0] == 1.0


class TestNuclearNorm:
    def test_identity(self):
        assert nuclear_norm(np.eye(4)) == pytest.approx(4.0)

    def test_diagonal(self):
        assert nuclear_norm(np.diag([3.0, 2.0])) == pytest.approx(5.0)

    def test_dominates_frobenius(self, rng):
        a = rng.standard_normal((5, 3))
        assert nuclear_norm(a) >= frobenius_norm(a) - 1e-12


class TestCompleteBasis:
    def test_extends_exactly(self, rng):
        u = random_orthonormal(rng, 6, 2)
        full = complete_basis(u, 5)
        assert full.shape == (6, 5)
        assert_orthonormal(full)
        np.testing.assert_array_equal(full[:, :2], u)

    def test_over_dimension_rejected(self, rng):
        with pytest.raises(ValueError):
            complete_basis(random_orthonormal(rng, 3, 2), 4)
