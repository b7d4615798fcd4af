# MIT License
#
# Copyright (c) [2023] [son pham, tien nguyen, bach bao]
#
# Permission is hereby granted, free of charge, to any person obtaining a copy
# of this software and associated documentation files (the "Software"), to deal
# in the Software without restriction, including without limitation the rights
# to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
# copies of the Software, and to permit persons to whom the Software is
# furnished to do so, subject to the following conditions:
#
# The above copyright notice and this permission notice shall be included in all
# copies or substantial portions of the Software.
#
# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
# IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
# FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
# AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
# LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
# OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
# SOFTWARE.


""" Sequential minimal optimization for the SVM without intercept

The dual problem solved here is::

    max  sum(alpha) - 1/2 alpha^T Y K Y alpha     s.t. 0 <= alpha_i <= C

Without the intercept there is no equality constraint, so every step updates a single coordinate.
"""
import logging

from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np

from src.constant import Defaults, Tolerance
from src.cwlk.sparse_vector import SparseVector, stack_vectors
from src.exceptions.learning_exception import (InvalidConfigError, LearningError, NonSymmetricKernelError,
                                               SingleClassError)
from src.utility import DictConfig, check_binary_labels, is_count, is_real

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SvmConfig(DictConfig):
    """ Box constraint and stopping rule

    Here is a list of available attributes of "SvmConfig" class:
        * C: box constraint
        * tol: largest KKT violation accepted at termination
        * max_passes: sweeps of n coordinate updates, 10 * n when None
    """
    C: float = Defaults.C.value
    tol: float = Defaults.TOL.value
    max_passes: Optional[int] = None

    def __post_init__(self) -> None:
        if not is_real(self.C) or not np.isfinite(self.C) or self.C <= 0:
            raise InvalidConfigError(f"C must be positive, got {self.C!r}")
        if not is_real(self.tol) or not np.isfinite(self.tol) or self.tol <= 0:
            raise InvalidConfigError(f"tol must be positive, got {self.tol!r}")
        if self.max_passes is not None and (not is_count(self.max_passes) or self.max_passes < 1):
            raise InvalidConfigError(f"max_passes must be a positive integer, got {self.max_passes!r}")

    def pass_budget(self, n_samples: int) -> int:
        if self.max_passes is not None:
            return int(self.max_passes)
        return Defaults.MAX_PASSES_PER_SAMPLE.value * max(n_samples, 1)


@dataclass
class DualSolution:
    """ Result of a dual solve

    Here is a list of available attributes of "DualSolution" class:
        * alpha: support coefficients, 0 <= alpha_i <= C
        * objective: dual objective value
        * converged: largest KKT violation fell below tol
        * passes: sweeps used
        * max_violation: largest KKT violation at termination
    """
    alpha: np.ndarray = field(default_factory=lambda: np.zeros(0))
    objective: float = 0.
    converged: bool = True
    passes: int = 0
    max_violation: float = 0.

    def to_dict(self) -> Dict[str, Any]:
        return {"alpha": [float(value) for value in self.alpha], "objective": float(self.objective),
                "converged": bool(self.converged), "passes": int(self.passes),
                "max_violation": float(self.max_violation)}

    @classmethod
    def from_dict(cls, document: Dict[str, Any]) -> "DualSolution":
        return cls(alpha=np.asarray(document["alpha"], dtype=np.float64), objective=float(document["objective"]),
                   converged=bool(document["converged"]), passes=int(document["passes"]),
                   max_violation=float(document["max_violation"]))


def check_kernel(K: np.ndarray, n_labels: int) -> np.ndarray:
    """ Validate a square symmetric kernel matrix
    Raises:
        LearningError: raise if the shape does not match the labels or entries are not finite
        NonSymmetricKernelError: raise if K differs from its transpose
    """
    K = np.asarray(K, dtype=np.float64)
    if K.ndim != 2 or K.shape[0] != K.shape[1] or K.shape[0] != n_labels:
        raise LearningError(f"kernel of shape {K.shape} does not match {n_labels} labels")
    if not np.all(np.isfinite(K)):
        raise LearningError("kernel matrix has non-finite entries")
    scale = max(1.0, float(np.max(np.abs(K)))) if K.size else 1.0
    if not np.allclose(K, K.T, rtol=0., atol=Tolerance.SYMMETRY.value * scale):
        raise NonSymmetricKernelError("kernel matrix is not symmetric")
    return K


def _violations(alpha: np.ndarray, gradient: np.ndarray, C: float) -> np.ndarray:
    """Projected gradient of the box constrained dual"""
    upward = np.where(alpha < C, np.maximum(gradient, 0.), 0.)
    downward = np.where(alpha > 0., np.maximum(-gradient, 0.), 0.)
    return np.maximum(upward, downward)


def dual_objective(alpha: Sequence[float], labels: Sequence[int], K: np.ndarray) -> float:
    """sum(alpha) - 1/2 alpha^T Y K Y alpha"""
    coefficients = np.asarray(alpha, dtype=np.float64) * check_binary_labels(labels)
    return float(np.sum(alpha) - 0.5 * coefficients @ np.asarray(K) @ coefficients)


def kkt_violation(alpha: Sequence[float], labels: Sequence[int], K: np.ndarray, C: float) -> float:
    """Largest projected gradient component; 0 at the optimum"""
    alpha = np.asarray(alpha, dtype=np.float64)
    y = check_binary_labels(labels)
    gradient = 1. - y * (np.asarray(K) @ (alpha * y))
    violations = _violations(alpha, gradient, C)
    return float(violations.max()) if violations.size else 0.


def smo_train(K: np.ndarray, labels: Sequence[int], cfg: SvmConfig = SvmConfig(),
              alpha0: Optional[Sequence[float]] = None) -> DualSolution:
    """ Solve the unbiased SVM dual by greedy coordinate ascent
    Args:
        K: symmetric PSD kernel matrix over the training samples
        labels: -1/+1 labels
        cfg: box constraint and stopping rule
        alpha0: warm start, clipped into the box

    Returns:
        DualSolution

    Raises:
        SingleClassError: raise if only one class is present
        NonSymmetricKernelError: raise if K is not symmetric

    Notes:
        * Each step picks the coordinate with the largest KKT violation and maximizes the dual along it
        * Running out of passes logs a warning and returns converged=False
    """
    y = check_binary_labels(labels)
    K = check_kernel(K, y.size)
    if np.unique(y).size < 2:
        raise SingleClassError("training labels contain a single class")
    n = y.size
    C = float(cfg.C)
    Q = K * np.outer(y, y)
    diagonal = np.diag(Q).copy()
    alpha = np.zeros(n) if alpha0 is None else np.clip(np.asarray(alpha0, dtype=np.float64), 0., C)
    if alpha.shape != (n,):
        raise LearningError(f"warm start has shape {alpha.shape}, expected ({n},)")
    gradient = 1. - Q @ alpha

    budget = cfg.pass_budget(n)
    converged, passes, stalled = False, 0, False
    while passes < budget and not stalled:
        passes += 1
        for _ in range(n):
            violations = _violations(alpha, gradient, C)
            i = int(np.argmax(violations))
            if violations[i] < cfg.tol:
                converged = True
                break
            if diagonal[i] > 0.:
                updated = min(max(alpha[i] + gradient[i] / diagonal[i], 0.), C)
            else:
                updated = C if gradient[i] > 0. else 0.
            delta = updated - alpha[i]
            if delta == 0.:
                stalled = True
                break
            alpha[i] = updated
            gradient -= delta * Q[:, i]
        if converged:
            break

    gradient = 1. - Q @ alpha
    violations = _violations(alpha, gradient, C)
    max_violation = float(violations.max()) if n else 0.
    converged = max_violation < cfg.tol
    objective = float(alpha.sum() - 0.5 * alpha @ Q @ alpha)
    if not converged:
        logger.warning("SMO stopped before reaching the KKT tolerance",
                       extra={"passes": passes, "max_violation": max_violation, "tol": cfg.tol})
    else:
        logger.debug("SMO converged", extra={"passes": passes, "objective": objective})
    return DualSolution(alpha=alpha, objective=objective, converged=converged, passes=passes,
                        max_violation=max_violation)


def primal_weights(solution: DualSolution, labels: Sequence[int], vectors: Sequence[SparseVector]) -> SparseVector:
    """ w = sum_i alpha_i y_i x_i
    Raises:
        LearningError: raise if alpha, labels and vectors differ in length
    """
    alpha = np.asarray(solution.alpha if isinstance(solution, DualSolution) else solution, dtype=np.float64)
    y = check_binary_labels(labels)
    if not (alpha.size == y.size == len(vectors)):
        raise LearningError(f"{alpha.size} coefficients, {y.size} labels and {len(vectors)} vectors")
    if not vectors:
        return SparseVector.zeros(0)
    matrix = stack_vectors(vectors)
    weights = np.asarray(matrix.T @ (alpha * y)).ravel()
    return SparseVector.from_dense(weights)


def dual_decision_values(alpha: Sequence[float], labels: Sequence[int], K_rows: np.ndarray) -> np.ndarray:
    """ Raw scores sum_i alpha_i y_i k(x_i, x) of every row
    Args:
        alpha: support coefficients
        labels: training labels
        K_rows: m x n kernel values between m inputs and the n training samples
    """
    coefficients = np.asarray(alpha, dtype=np.float64) * check_binary_labels(labels)
    return np.atleast_2d(np.asarray(K_rows, dtype=np.float64)) @ coefficients


def predict(w: SparseVector, x: SparseVector) -> Tuple[int, float]:
    """ Sign and raw value of <w, x>; a zero raw value predicts -1 """
    raw = w.dot(x)
    return (1 if raw > 0. else -1), raw
