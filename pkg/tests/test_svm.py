"""Dual solver, bias, decision function, and model serialization tests."""

import numpy as np
import pytest

from qksvm.errors import ConfigError, DataError, TrainingError
from qksvm.feature_map import FeatureMapSpec
from qksvm.kernels import QuantumKernelSpec, RbfKernelSpec, gram_matrix
from qksvm.svm import (
    RegularizationParams,
    SvmModel,
    accuracy,
    compute_bias,
    decision_function,
    decision_function_batch,
    fit,
    kkt_max_violation,
    load_model,
    predict,
    save_model,
    solve_dual,
)

from oracles import projected_gradient_best_objective


def linear_gram(X):
    X = np.asarray(X, dtype=float)
    return X @ X.T


def random_psd_problem(rng, m):
    A = rng.normal(size=(m, m + 2))
    K = A @ A.T
    d = np.sqrt(np.diag(K))
    K = K / np.outer(d, d)  # unit diagonal keeps scales comparable
    y = np.ones(m)
    y[: m // 2] = -1.0
    rng.shuffle(y)
    return K, y


class TestRegularizationParams:
    def test_validation(self):
        with pytest.raises(ConfigError):
            RegularizationParams(C=0.0)
        with pytest.raises(ConfigError):
            RegularizationParams(C=1.0, lambda1=1.0)
        with pytest.raises(ConfigError):
            RegularizationParams(C=1.0, lambda2=-0.1)

    def test_round_trip(self):
        reg = RegularizationParams(C=5.0, lambda1=0.2, lambda2=0.3)
        assert RegularizationParams.from_dict(reg.to_dict()) == reg


class TestTwoPointAnalytic:
    def test_hard_margin_betas(self):
        X = np.array([[2.0, 0.0], [0.0, 0.0]])
        y = np.array([1, -1])
        reg = RegularizationParams(C=1e6)
        betas, report = solve_dual(linear_gram(X), y, reg)
        expected = 2.0 / np.linalg.norm(X[0] - X[1]) ** 2
        np.testing.assert_allclose(betas, [expected, expected], atol=1e-6)
        assert report.converged

    def test_bias_is_minus_one(self):
        X = np.array([[2.0, 0.0], [0.0, 0.0]])
        y = np.array([1, -1])
        reg = RegularizationParams(C=1e6)
        K = linear_gram(X)
        betas, _ = solve_dual(K, y, reg)
        assert abs(compute_bias(betas, K, y, reg) - (-1.0)) < 1e-6

    def test_symmetric_problem_has_zero_bias(self):
        X = np.array([[1.0, 0.0], [-1.0, 0.0]])
        y = np.array([1, -1])
        reg = RegularizationParams(C=1e6)
        K = linear_gram(X)
        betas, _ = solve_dual(K, y, reg)
        assert abs(compute_bias(betas, K, y, reg)) < 1e-9

    def test_midpoint_scores_zero(self):
        # Same geometry through the public fit/predict path with RBF.
        X = np.array([[2.0, 0.0], [0.0, 0.0]])
        y = np.array([1, -1])
        model, _ = fit(X, y, RbfKernelSpec(h=1.0), RegularizationParams(C=1e6))
        assert abs(decision_function(model, np.array([1.0, 0.0]))) < 1e-9

    def test_margin_at_support_vectors(self):
        X = np.array([[2.0, 0.0], [0.0, 0.0]])
        y = np.array([1, -1])
        reg = RegularizationParams(C=1e6)
        K = linear_gram(X)
        betas, _ = solve_dual(K, y, reg)
        b = compute_bias(betas, K, y, reg)
        f = K @ (betas * y) + b
        np.testing.assert_allclose(y * f, [1.0, 1.0], atol=1e-6)


class TestSolveDual:
    def test_zero_point_feasible_objective_nonnegative(self):
        rng = np.random.default_rng(0)
        K, y = random_psd_problem(rng, 10)
        _, report = solve_dual(K, y, RegularizationParams(C=1.0))
        assert report.final_objective >= 0.0

    def test_diagonal_shift_equivalence(self):
        rng = np.random.default_rng(1)
        K, y = random_psd_problem(rng, 8)
        reg_l2 = RegularizationParams(C=10.0, lambda2=0.1)
        reg_plain = RegularizationParams(C=10.0)
        betas_a, _ = solve_dual(K, y, reg_l2)
        betas_b, _ = solve_dual(K + 0.2 * np.eye(8), y, reg_plain)
        np.testing.assert_allclose(betas_a, betas_b, atol=1e-6)

    @pytest.mark.parametrize("m", [4, 5, 6])
    def test_brute_force_objective_equivalence(self, m):
        rng = np.random.default_rng(100 + m)
        for _ in range(3):
            K, y = random_psd_problem(rng, m)
            C = 5.0
            betas, report = solve_dual(K, y, RegularizationParams(C=C))
            oracle = projected_gradient_best_objective(K, y, C=C, seed=m)
            assert report.converged
            assert abs(report.final_objective - oracle) < 1e-4

    def test_feasibility_even_when_not_converged(self):
        rng = np.random.default_rng(2)
        K, y = random_psd_problem(rng, 20)
        C = 100.0
        betas, report = solve_dual(K, y, RegularizationParams(C=C), max_iter=3)
        assert not report.converged
        assert betas.min() >= -1e-12
        assert betas.max() <= C + 1e-12
        assert abs(np.dot(betas, y)) < 1e-8

    def test_monotone_ascent(self):
        rng = np.random.default_rng(3)
        K, y = random_psd_problem(rng, 15)
        _, report = solve_dual(
            K, y, RegularizationParams(C=10.0), track_objective=True
        )
        hist = np.array(report.objective_history)
        assert np.all(np.diff(hist) >= -1e-10)

    def test_kkt_audit_on_converged_models(self):
        rng = np.random.default_rng(4)
        for m in (10, 20, 30):
            K, y = random_psd_problem(rng, m)
            for l2 in (0.0, 0.05):
                reg = RegularizationParams(C=10.0, lambda2=l2)
                betas, report = solve_dual(K, y, reg, tol=1e-6)
                assert report.converged
                b = compute_bias(betas, K, y, reg)
                worst = kkt_max_violation(betas, K, y, reg, b)
                assert worst <= 1e-6 + 1e-10

    def test_l2_never_grows_coefficient_norm(self):
        rng = np.random.default_rng(5)
        K, y = random_psd_problem(rng, 12)
        norms = []
        for l2 in (0.0, 0.01, 0.1, 1.0):
            betas, _ = solve_dual(K, y, RegularizationParams(C=10.0, lambda2=l2))
            norms.append(np.linalg.norm(betas))
        assert all(b <= a + 1e-7 for a, b in zip(norms, norms[1:]))

    def test_lambda1_scales_linear_term(self):
        # On a problem where the box never binds, l1 shrinks the solution
        # exactly like scaling the margin target.
        X = np.array([[2.0, 0.0], [0.0, 0.0]])
        y = np.array([1, -1])
        K = linear_gram(X)
        betas0, _ = solve_dual(K, y, RegularizationParams(C=1e6))
        betas1, _ = solve_dual(K, y, RegularizationParams(C=1e6, lambda1=0.5))
        np.testing.assert_allclose(betas1, 0.5 * betas0, atol=1e-8)

    def test_single_class_rejected(self):
        K = np.eye(4)
        with pytest.raises(TrainingError):
            solve_dual(K, np.ones(4), RegularizationParams(C=1.0))

    def test_non_finite_kernel_rejected(self):
        K = np.eye(4)
        K[1, 2] = np.nan
        y = np.array([1.0, 1.0, -1.0, -1.0])
        with pytest.raises(DataError):
            solve_dual(K, y, RegularizationParams(C=1.0))

    def test_max_iter_reports_not_converged(self):
        rng = np.random.default_rng(6)
        K, y = random_psd_problem(rng, 30)
        _, report = solve_dual(K, y, RegularizationParams(C=100.0), max_iter=5)
        assert not report.converged
        assert report.iterations == 5
        assert report.kkt_violation > 0


class TestBias:
    def test_no_support_vectors_rejected(self):
        K = np.eye(2)
        y = np.array([1.0, -1.0])
        with pytest.raises(TrainingError):
            compute_bias(np.zeros(2), K, y, RegularizationParams(C=1.0))

    def test_all_at_cap_uses_interval_midpoint(self):
        # Tiny C forces both points to the cap; the KKT interval for b is
        # [y1 - F1, y2 - F2] whose midpoint keeps both feasible.
        X = np.array([[1.0, 0.0], [-0.5, 0.0]])
        y = np.array([1, -1])
        reg = RegularizationParams(C=0.01)
        K = linear_gram(X)
        betas, _ = solve_dual(K, y, reg)
        assert np.allclose(betas, reg.C)
        b = compute_bias(betas, K, y, reg)
        F = K @ (betas * y)
        lo = -1.0 - F[1]
        hi = 1.0 - F[0]
        assert abs(b - 0.5 * (lo + hi)) < 1e-12


class TestDecisionAndAccuracy:
    def test_degenerate_zero_betas_score_is_bias(self):
        model = SvmModel(
            kernel=RbfKernelSpec(h=1.0),
            reg=RegularizationParams(C=1.0),
            train_X=np.array([[0.0, 0.0], [1.0, 1.0]]),
            labels=np.array([1, -1]),
            betas=np.zeros(2),
            bias=0.7,
        )
        assert decision_function(model, np.array([5.0, 5.0])) == 0.7

    def test_sign_zero_counts_positive(self):
        model = SvmModel(
            kernel=RbfKernelSpec(h=1.0),
            reg=RegularizationParams(C=1.0),
            train_X=np.array([[0.0, 0.0], [1.0, 1.0]]),
            labels=np.array([1, -1]),
            betas=np.zeros(2),
            bias=0.0,
        )
        assert predict(model, np.array([[2.0, 2.0]]))[0] == 1

    def test_separable_training_set_fully_memorized(self):
        rng = np.random.default_rng(7)
        X = np.vstack([rng.normal(0, 0.3, (15, 2)) + [2, 2],
                       rng.normal(0, 0.3, (15, 2)) - [2, 2]])
        y = np.array([1] * 15 + [-1] * 15)
        model, report = fit(X, y, RbfKernelSpec(h=2.0), RegularizationParams(C=1e3))
        assert report.converged
        assert accuracy(model, X, y) == 1.0

    def test_flipped_labels_complement_accuracy(self):
        rng = np.random.default_rng(8)
        X = rng.uniform(0, 2 * np.pi, size=(20, 2))
        y = np.where(X[:, 0] > np.pi, 1, -1)
        model, _ = fit(X, y, RbfKernelSpec(h=1.0), RegularizationParams(C=10.0))
        acc = accuracy(model, X, y)
        assert abs((1.0 - acc) - accuracy(model, X, -y)) < 1e-12

    def test_empty_eval_rejected(self):
        model, _ = fit(
            np.array([[0.0, 0.0], [1.0, 1.0]]),
            np.array([1, -1]),
            RbfKernelSpec(h=1.0),
            RegularizationParams(C=1.0),
        )
        with pytest.raises(ValueError):
            accuracy(model, np.empty((0, 2)), np.empty(0))

    def test_dimension_mismatch(self):
        model, _ = fit(
            np.array([[0.0, 0.0], [1.0, 1.0]]),
            np.array([1, -1]),
            RbfKernelSpec(h=1.0),
            RegularizationParams(C=1.0),
        )
        with pytest.raises(ValueError):
            decision_function_batch(model, np.zeros((2, 3)))


class TestModelSerialization:
    def build_model(self):
        rng = np.random.default_rng(9)
        X = rng.uniform(0, 2 * np.pi, size=(12, 2))
        y = np.where(np.sin(X[:, 0]) > 0, 1, -1)
        if len(set(y.tolist())) == 1:
            y[0] = -y[0]
        fm = FeatureMapSpec(paulis=("Z", "ZZ"), alpha=1.5, depth=2)
        model, _ = fit(
            X, y, QuantumKernelSpec(fm), RegularizationParams(C=10.0, lambda2=0.01)
        )
        return model, X

    def test_round_trip_scores_identical(self, tmp_path):
        model, X = self.build_model()
        path = tmp_path / "model.json"
        save_model(model, path)
        loaded = load_model(path)
        before = decision_function_batch(model, X)
        after = decision_function_batch(loaded, X)
        np.testing.assert_allclose(after, before, atol=1e-12)
        assert loaded.kernel == model.kernel
        assert loaded.reg == model.reg

    def test_unknown_major_version_rejected(self, tmp_path):
        model, _ = self.build_model()
        doc = model.to_dict()
        doc["format_version"] = "2.0"
        import json

        path = tmp_path / "model.json"
        path.write_text(json.dumps(doc))
        with pytest.raises(ConfigError):
            load_model(path)

    def test_support_vectors_exposed(self):
        model, _ = self.build_model()
        assert model.n_support >= 1
        assert model.support_points.shape[1] == 2


def test_fit_integrates_gram_and_bias():
    rng = np.random.default_rng(10)
    X = rng.uniform(0, 2 * np.pi, size=(16, 2))
    y = np.where(X[:, 1] > np.pi, 1, -1)
    reg = RegularizationParams(C=10.0)
    model, report = fit(X, y, RbfKernelSpec(h=1.0), reg)
    K = gram_matrix(X, RbfKernelSpec(h=1.0))
    assert report.converged
    assert abs(compute_bias(model.betas, K, y, reg) - model.bias) < 1e-15
