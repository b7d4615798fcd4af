"""Test the unbiased SMO solver"""
from scipy.optimize import minimize
from src.cwlk.sparse_vector import SparseVector
from src.exceptions.learning_exception import InvalidConfigError, NonSymmetricKernelError, SingleClassError
from src.svm.smo import (DualSolution, SvmConfig, dual_decision_values, dual_objective, kkt_violation,
                         predict, primal_weights, smo_train)
import numpy as np
import unittest


def reference_objective(K: np.ndarray, y: np.ndarray, C: float) -> float:
    """Box constrained quasi-Newton solve of the same dual"""
    Q = K * np.outer(y, y)

    def negative(alpha):
        return 0.5 * alpha @ Q @ alpha - alpha.sum(), Q @ alpha - 1.

    result = minimize(negative, np.zeros(y.size), jac=True, method="L-BFGS-B", bounds=[(0., C)] * y.size,
                      options={"ftol": 1e-15, "gtol": 1e-12, "maxiter": 10000})
    return -float(result.fun)


class TestSmo(unittest.TestCase):
    """Check the dual solver"""

    def setUp(self) -> None:
        self.rng = np.random.default_rng(11)

    def test_orthonormal_points(self) -> None:
        solution = smo_train(np.eye(2), [1, -1], SvmConfig(C=100.))
        np.testing.assert_allclose(solution.alpha, [1., 1.], atol=1e-9)
        self.assertTrue(solution.converged)
        values = dual_decision_values(solution.alpha, [1, -1], np.eye(2))
        np.testing.assert_allclose(values, [1., -1.], atol=1e-9)

    def test_antipodal_points(self) -> None:
        x = SparseVector([0, 1], [0.6, 0.8], 2)
        vectors = [x, x.scale(-1.)]
        K = np.array([[1., -1.], [-1., 1.]])
        solution = smo_train(K, [1, -1], SvmConfig(C=100.))
        self.assertAlmostEqual(float(solution.alpha.sum()), 1., places=9)
        w = primal_weights(solution, [1, -1], vectors)
        np.testing.assert_allclose(w.to_dense(), x.to_dense(), atol=1e-9)

    def test_matches_reference_optimizer(self) -> None:
        cfg = SvmConfig(C=1., tol=1e-9, max_passes=100000)
        for _ in range(50):
            n = int(self.rng.integers(2, 9))
            X = self.rng.normal(size=(n, int(self.rng.integers(2, 6))))
            K = X @ X.T
            y = np.where(self.rng.random(n) < 0.5, 1, -1)
            y[0], y[1] = 1, -1
            solution = smo_train(K, y, cfg)
            self.assertTrue(solution.converged)
            self.assertLess(kkt_violation(solution.alpha, y, K, cfg.C), cfg.tol)
            self.assertTrue(np.all(solution.alpha >= 0.) and np.all(solution.alpha <= cfg.C))
            self.assertGreaterEqual(solution.objective, reference_objective(K, y, cfg.C) - 1e-6)
            self.assertAlmostEqual(solution.objective, dual_objective(solution.alpha, y, K), places=9)

    def test_dual_and_primal_scores_agree(self) -> None:
        dense = self.rng.random((30, 12))
        vectors = [SparseVector.from_dense(row) for row in dense]
        y = np.where(dense[:, 0] > 0.5, 1, -1)
        K = dense[:20] @ dense[:20].T
        solution = smo_train(K, y[:20], SvmConfig(C=10.))
        w = primal_weights(solution, y[:20], vectors[:20])
        dual = dual_decision_values(solution.alpha, y[:20], dense[20:] @ dense[:20].T)
        for index, vector in enumerate(vectors[20:]):
            sign, raw = predict(w, vector)
            self.assertAlmostEqual(raw, dual[index], places=9)
            self.assertEqual(sign, 1 if dual[index] > 0. else -1)

    def test_zero_score_predicts_negative(self) -> None:
        self.assertEqual(predict(SparseVector.zeros(3), SparseVector([0], [1.], 3)), (-1, 0.))

    def test_zero_alpha_gives_zero_weights(self) -> None:
        vectors = [SparseVector([0], [1.], 2), SparseVector([1], [1.], 2)]
        self.assertEqual(primal_weights(DualSolution(alpha=np.zeros(2)), [1, -1], vectors).nnz, 0)

    def test_warm_start_is_clipped(self) -> None:
        solution = smo_train(np.eye(2), [1, -1], SvmConfig(C=0.5), alpha0=[3., -1.])
        np.testing.assert_allclose(solution.alpha, [0.5, 0.5])

    def test_pass_budget_reports_non_convergence(self) -> None:
        X = self.rng.normal(size=(40, 3))
        y = np.where(X[:, 0] > 0, 1, -1)
        solution = smo_train(X @ X.T, y, SvmConfig(C=1000., tol=1e-12, max_passes=1))
        self.assertFalse(solution.converged)
        self.assertEqual(solution.passes, 1)
        self.assertGreater(solution.max_violation, 1e-12)

    def test_input_validation(self) -> None:
        with self.assertRaises(SingleClassError):
            smo_train(np.eye(2), [1, 1])
        with self.assertRaises(NonSymmetricKernelError):
            smo_train(np.array([[1., 0.5], [0., 1.]]), [1, -1])
        with self.assertRaises(InvalidConfigError):
            SvmConfig(C=0.)
        self.assertEqual(SvmConfig().pass_budget(7), 70)


if __name__ == "__main__":
    unittest.main()
