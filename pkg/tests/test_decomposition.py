import numpy as np
import pytest

from l1tucker.decomposition import (
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
from l1tucker.l1pca import L1PcaConfig, l1pca_exact
from l1tucker.linalg import dominant_left_basis
from l1tucker.tensor import frobenius_norm, l1_norm, multi_mode_product, unfold
from tests.conftest import random_orthonormal


def random_tucker(rng, shape, ranks, core_std=1.0):
    bases = [random_orthonormal(rng, d, r) for d, r in zip(shape, ranks)]
    core = core_std * rng.standard_normal(ranks)
    return multi_mode_product(core, bases), bases


def nse(x_true, x_hat):
    return frobenius_norm(x_true - x_hat) ** 2 / frobenius_norm(x_true) ** 2


class TestMetrics:
    def test_identity_bases(self, rng):
        x = rng.standard_normal((3, 4, 2))
        eyes = [np.eye(d) for d in x.shape]
        assert tucker_metric_l2(x, eyes) == pytest.approx(frobenius_norm(x) ** 2)
        assert tucker_metric_l1(x, eyes) == pytest.approx(l1_norm(x))

    def test_l1_metric_upper_bound(self, rng):
        x = rng.standard_normal((4, 5, 3))
        ranks = (2, 3, 2)
        for _ in range(20):
            bases = [random_orthonormal(rng, d, r) for d, r in zip(x.shape, ranks)]
            bound = np.sqrt(np.prod(ranks)) * frobenius_norm(x)
            assert tucker_metric_l1(x, bases) <= bound + 1e-9

    def test_per_mode_identity(self, rng):
        # The full projected L1 metric equals the mode-m L1-PCA objective on
        # the unfolding projected over all other modes, for every m.
        x = rng.standard_normal((4, 3, 5))
        ranks = (2, 2, 3)
        bases = [random_orthonormal(rng, d, r) for d, r in zip(x.shape, ranks)]
        full = tucker_metric_l1(x, bases)
        for m in range(3):
            a_m = projected_unfolding(x, bases, m)
            assert l1_norm(bases[m].T @ a_m) == pytest.approx(full, abs=1e-9)

    def test_dim_mismatch(self, rng):
        x = rng.standard_normal((3, 4))
        with pytest.raises(ValueError):
            tucker_metric_l2(x, [np.eye(2), np.eye(4)])


class TestHosvd:
    def test_matrix_case_matches_svd(self, rng):
        x = rng.standard_normal((5, 7))
        model = hosvd(x, (2, 3))
        np.testing.assert_allclose(model.bases[0], dominant_left_basis(x, 2))
        np.testing.assert_allclose(model.bases[1], dominant_left_basis(x.T, 3))

    def test_superdiagonal(self):
        x = np.zeros((3, 3, 3))
        for i, v in enumerate((3.0, 2.0, 1.0)):
            x[i, i, i] = v
        model = hosvd(x, (2, 2, 2))
        target = np.diag([1.0, 1.0, 0.0])
        for u in model.bases:
            np.testing.assert_allclose(u @ u.T, target, atol=1e-12)

    def test_full_rank_exact_reconstruction(self, rng):
        x = rng.standard_normal((3, 4, 2))
        model = hosvd(x, x.shape)
        assert nse(x, reconstruct(x, model)) <= 1e-12

    def test_rank_too_large(self, rng):
        with pytest.raises(ValueError):
            hosvd(rng.standard_normal((3, 3)), (4, 2))

    def test_core_stored(self, rng):
        x = rng.standard_normal((4, 4, 4))
        model = hosvd(x, (2, 2, 2))
        np.testing.assert_allclose(model.core, model.project(x))
        assert model.ranks == (2, 2, 2)
        assert model.dims == (4, 4, 4)


class TestHooi:
    def test_dominates_hosvd(self, rng):
        for _ in range(10):
            x = rng.standard_normal((5, 6, 4))
            ranks = (2, 3, 2)
            base = tucker_metric_l2(x, hosvd(x, ranks).bases)
            refined, trace = hooi(x, ranks)
            assert tucker_metric_l2(x, refined.bases) >= base - 1e-9
            assert np.all(np.diff(trace.metrics) >= -1e-9)

    def test_recovers_noiseless_structure(self, rng):
        x, _ = random_tucker(rng, (6, 5, 4), (2, 2, 3))
        model, trace = hooi(x, (2, 2, 3))
        assert nse(x, reconstruct(x, model)) <= 1e-9
        assert trace.converged

    def test_degenerate_single_mode(self, rng):
        x = rng.standard_normal((6, 1, 1))
        model, _ = hooi(x, (1, 1, 1))
        expected = dominant_left_basis(unfold(x, 0), 1)
        np.testing.assert_allclose(model.bases[0], expected, atol=1e-12)


class TestL1Hosvd:
    def test_per_mode_improvement_over_hosvd(self, rng):
        for _ in range(5):
            x = rng.standard_normal((4, 5, 3))
            ranks = (2, 2, 2)
            init = hosvd(x, ranks)
            model = l1_hosvd(x, ranks)
            for n in range(3):
                flat = unfold(x, n)
                assert l1_norm(model.bases[n].T @ flat) >= l1_norm(init.bases[n].T @ flat) - 1e-9

    def test_mode_bases_bounded_by_exact_oracle(self, rng):
        x = rng.standard_normal((2, 3, 2))
        model = l1_hosvd(x, (1, 1, 1))
        for n in range(3):
            flat = unfold(x, n)
            exact = l1pca_exact(flat, 1)
            assert l1_norm(model.bases[n].T @ flat) <= exact.metric + 1e-9

    def test_clean_data_reconstruction_near_hosvd(self, rng):
        # On corruption-free data the robust bases match classical quality.
        ratios = []
        for _ in range(20):
            x, _ = random_tucker(rng, (6, 7, 5), (2, 3, 2), core_std=3.0)
            noisy = x + 0.1 * rng.standard_normal(x.shape)
            l2 = nse(x, reconstruct(noisy, hosvd(noisy, (2, 3, 2))))
            l1m = nse(x, reconstruct(noisy, l1_hosvd(noisy, (2, 3, 2))))
            ratios.append(l1m / l2)
        assert np.mean(ratios) <= 10.0


class TestL1Hooi:
    def test_final_at_least_init(self, rng):
        for _ in range(5):
            x = rng.standard_normal((4, 3, 5))
            ranks = (2, 2, 2)
            init_metric = tucker_metric_l1(x, l1_hosvd(x, ranks).bases)
            model, trace = l1_hooi(x, ranks)
            assert trace.metrics[-1] >= init_metric - 1e-9
            assert trace.metrics[0] == pytest.approx(init_metric, abs=1e-9)

    def test_five_way_convergence(self, rng):
        x = rng.standard_normal((10, 10, 10, 10, 10))
        model, trace = l1_hooi(x, (5, 5, 5, 5, 5))
        assert trace.converged
        assert trace.iterations <= 100
        assert np.all(np.diff(trace.metrics) >= -1e-9)

    def test_full_ranks(self, rng):
        # Full-rank bases rotate the tensor; the metric still dominates the
        # L1-HOSVD start and obeys the sqrt(p)-Frobenius upper bound.
        x = rng.standard_normal((3, 4, 3))
        init_metric = tucker_metric_l1(x, l1_hosvd(x, x.shape).bases)
        model, trace = l1_hooi(x, x.shape)
        assert trace.metrics[-1] >= init_metric - 1e-9
        bound = np.sqrt(x.size) * frobenius_norm(x)
        assert all(m <= bound + 1e-9 for m in trace.metrics)
        assert nse(x, reconstruct(x, model)) <= 1e-12

    def test_within_sweep_chain_and_cross_sweep_link(self, rng):
        # Inside one sweep the inner objectives only grow with the mode
        # index, and the first inner objective of sweep q dominates the last
        # of sweep q-1.
        x = rng.standard_normal((4, 4, 4))
        _, trace = l1_hooi(x, (2, 2, 2))
        for sweep in trace.mode_metrics:
            assert np.all(np.diff(sweep) >= -1e-9)
        for prev, cur in zip(trace.mode_metrics, trace.mode_metrics[1:]):
            assert cur[0] >= prev[-1] - 1e-9

    def test_monotone_outer_trace(self, rng):
        for _ in range(5):
            x = rng.standard_normal((5, 4, 3))
            _, trace = l1_hooi(x, (2, 2, 2))
            assert np.all(np.diff(trace.metrics) >= -1e-9)

    def test_deterministic(self, rng):
        x = rng.standard_normal((4, 5, 3))
        m1, t1 = l1_hooi(x, (2, 2, 2))
        m2, t2 = l1_hooi(x.copy(), (2, 2, 2))
        for a, b in zip(m1.bases, m2.bases):
            np.testing.assert_array_equal(a, b)
        assert t1.metrics == t2.metrics

    def test_random_init_seeded(self, rng):
        x = rng.standard_normal((4, 5, 3))
        cfg = HooiConfig(init="random", seed=11)
        m1, _ = l1_hooi(x, (2, 2, 2), cfg)
        m2, _ = l1_hooi(x, (2, 2, 2), cfg)
        for a, b in zip(m1.bases, m2.bases):
            np.testing.assert_array_equal(a, b)

    def test_zero_tensor_converges_immediately(self):
        x = np.zeros((3, 3, 3))
        _, trace = l1_hooi(x, (2, 2, 2))
        assert trace.converged
        assert trace.iterations == 1


class TestReconstruct:
    def test_full_ranks_identity(self, rng):
        x = rng.standard_normal((3, 4, 2))
        model = hosvd(x, x.shape)
        np.testing.assert_allclose(reconstruct(x, model), x, atol=1e-12)

    def test_two_paths_agree(self, rng):
        x = rng.standard_normal((4, 5, 3))
        model = hosvd(x, (2, 3, 2))
        fused = multi_mode_product(x, [u @ u.T for u in model.bases])
        np.testing.assert_allclose(reconstruct(x, model), fused, atol=1e-10)

    def test_projection_shrinks(self, rng):
        x = rng.standard_normal((4, 5, 3))
        model = hosvd(x, (2, 2, 2))
        assert frobenius_norm(reconstruct(x, model)) <= frobenius_norm(x) + 1e-12

    def test_shape_mismatch(self, rng):
        model = hosvd(rng.standard_normal((3, 4)), (2, 2))
        with pytest.raises(ValueError):
            reconstruct(rng.standard_normal((4, 3)), model)


class TestConfig:
    def test_validation(self):
        with pytest.raises(ValueError):
            HooiConfig(tol=-1.0)
        with pytest.raises(ValueError):
            HooiConfig(max_outer_iters=0)
        with pytest.raises(ValueError):
            HooiConfig(init="bogus")

    def test_inner_defaults_to_outer_tol(self):
        cfg = HooiConfig(tol=1e-4)
        assert cfg.inner_config().tol == 1e-4
        explicit = L1PcaConfig(tol=1e-2)
        assert HooiConfig(inner=explicit).inner_config() is explicit
