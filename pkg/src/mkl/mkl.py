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


""" Lp-norm multiple kernel learning by alternating SVM solves and analytic weight updates

For fixed support coefficients the view weights follow::

    beta_v  proportional to  ||w_v|| ** (2 / (p + 1)),   ||w_v||^2 = beta_v^2 * alpha^T Y K_v Y alpha

rescaled to unit p-norm. Each SVM solve is warm started from the previous coefficients.
"""
import dataclasses
import logging

from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from src.constant import Defaults
from src.cwlk.config import CwlConfig
from src.cwlk.kernel import kernel_matrix
from src.cwlk.sparse_vector import SparseVector, concatenate
from src.cwlk.vocabulary import Vocabulary
from src.exceptions.kernel_exception import DimensionMismatchError
from src.exceptions.learning_exception import InvalidConfigError, LearningError, MissingViewError
from src.featureselection.chi2 import SelectionMask
from src.svm.smo import DualSolution, SvmConfig, primal_weights, smo_train
from src.utility import DictConfig, check_binary_labels, is_count, is_real

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MklConfig(DictConfig):
    """ Hyperparameters of the kernel combination

    Here is a list of available attributes of "MklConfig" class:
        * C: box constraint of every SVM solve, overrides svm.C
        * p: norm of the weight regularizer, p >= 1
        * outer_tol: relative objective change that stops the alternation
        * max_outer_iters: cap on SVM solves
        * svm: tolerance and pass budget of the inner solver
    """
    C: float = Defaults.C.value
    p: float = Defaults.P.value
    outer_tol: float = Defaults.OUTER_TOL.value
    max_outer_iters: int = Defaults.MAX_OUTER_ITERS.value
    svm: SvmConfig = field(default_factory=SvmConfig)

    def __post_init__(self) -> None:
        if isinstance(self.svm, Mapping):
            object.__setattr__(self, "svm", SvmConfig.from_dict(self.svm))
        elif not isinstance(self.svm, SvmConfig):
            raise InvalidConfigError(f"svm settings must be a mapping, got {self.svm!r}")
        if not is_real(self.p) or not np.isfinite(self.p) or self.p < 1:
            raise InvalidConfigError(f"p must be at least 1, got {self.p!r}")
        if not is_real(self.outer_tol) or not np.isfinite(self.outer_tol) or self.outer_tol <= 0:
            raise InvalidConfigError(f"outer_tol must be positive, got {self.outer_tol!r}")
        if not is_count(self.max_outer_iters) or self.max_outer_iters < 1:
            raise InvalidConfigError(f"max_outer_iters must be a positive integer, got {self.max_outer_iters!r}")
        object.__setattr__(self, "svm", dataclasses.replace(self.svm, C=self.C))


@dataclass
class MklModel:
    """ Trained multi-view model in primal form

    Here is a list of available attributes of "MklModel" class:
        * betas: view -> kernel weight
        * alpha: final dual solution
        * composite_weights: W = sum_i alpha_i y_i X_i over the concatenated feature space
        * view_offsets: view -> (start, length) of its block in the concatenated space
        * config: MklConfig used for training
        * uniform: weights were fixed to 1/|V|
        * objective_trace: dual objective after every SVM solve
        * converged: the alternation met outer_tol
        * sample_ids, labels: training samples, in the order of alpha
        * cwl_config, vocabularies, masks, vocabulary_sizes: featurization state, filled by the pipeline
    """
    betas: Dict[str, float]
    alpha: DualSolution
    composite_weights: SparseVector
    view_offsets: Dict[str, Tuple[int, int]]
    config: MklConfig = field(default_factory=MklConfig)
    uniform: bool = False
    objective_trace: List[float] = field(default_factory=list)
    converged: bool = True
    sample_ids: List[str] = field(default_factory=list)
    labels: List[int] = field(default_factory=list)
    cwl_config: Optional[CwlConfig] = None
    vocabularies: Dict[str, Vocabulary] = field(default_factory=dict)
    masks: Dict[str, Optional[SelectionMask]] = field(default_factory=dict)
    vocabulary_sizes: Dict[str, Tuple[int, int]] = field(default_factory=dict)

    @property
    def views(self) -> List[str]:
        return sorted(self.betas)

    def normalized_betas(self) -> Dict[str, float]:
        """Weights rescaled to sum 1, for reports"""
        total = sum(self.betas.values())
        if total == 0.:
            return {view: 0. for view in self.betas}
        return {view: beta / total for view, beta in self.betas.items()}

    def view_weights(self, view: str) -> SparseVector:
        """Block of W belonging to one view"""
        start, length = self.view_offsets[view]
        inside = (self.composite_weights.indices >= start) & (self.composite_weights.indices < start + length)
        return SparseVector(self.composite_weights.indices[inside] - start,
                            self.composite_weights.values[inside], length)


def _check_views(per_view_vectors: Mapping[str, Sequence[SparseVector]], n_samples: int) -> List[str]:
    views = sorted(per_view_vectors)
    if not views:
        raise LearningError("at least one view is required")
    for view in views:
        vectors = per_view_vectors[view]
        if len(vectors) != n_samples:
            raise LearningError(f"view {view!r} has {len(vectors)} vectors for {n_samples} labels")
        if len({vector.dimension for vector in vectors}) > 1:
            raise DimensionMismatchError(f"vectors of view {view!r} differ in dimension")
    return views


def combine_kernels(kernels: Mapping[str, np.ndarray], betas: Mapping[str, float]) -> np.ndarray:
    """k_comb = sum_v beta_v K_v"""
    views = sorted(kernels)
    combined = np.zeros_like(kernels[views[0]], dtype=np.float64)
    for view in views:
        combined += betas[view] * kernels[view]
    return combined


def update_betas(betas: Mapping[str, float], alpha: np.ndarray, y: np.ndarray,
                 kernels: Mapping[str, np.ndarray], p: float) -> Dict[str, float]:
    """ Analytic weight update for fixed support coefficients

    Notes:
        * When every view has zero weight norm the previous weights are kept
    """
    coefficients = alpha * y
    views = sorted(kernels)
    norms = np.array([betas[view] * np.sqrt(max(float(coefficients @ kernels[view] @ coefficients), 0.))
                      for view in views])
    powered = norms ** (2. / (p + 1.))
    scale = np.sum(powered ** p) ** (1. / p)
    if scale == 0. or not np.isfinite(scale):
        return dict(betas)
    return {view: float(value / scale) for view, value in zip(views, powered)}


def alternate(kernels: Mapping[str, np.ndarray], labels: Sequence[int], cfg: MklConfig,
              uniform: bool = False) -> Tuple[Dict[str, float], DualSolution, List[float], bool]:
    """ Alternating optimization on precomputed per-view kernels
    Args:
        kernels: view -> Gram matrix over the training samples
        labels: -1/+1 labels
        cfg: hyperparameters
        uniform: keep beta_v = 1/|V| and solve once

    Returns:
        betas, final dual solution, objective trace, whether the alternation converged
    """
    y = check_binary_labels(labels)
    views = sorted(kernels)
    betas = {view: 1. / len(views) for view in views}
    if not uniform:
        for view in views:
            if not np.any(kernels[view]):
                logger.warning("View embeds every sample to zero, its weight is forced to 0", extra={"view": view})
                betas[view] = 0.

    solution = smo_train(combine_kernels(kernels, betas), y, cfg.svm)
    trace = [solution.objective]
    converged = True
    if not uniform:
        converged = False
        while len(trace) < cfg.max_outer_iters:
            betas = update_betas(betas, solution.alpha, y, kernels, cfg.p)
            solution = smo_train(combine_kernels(kernels, betas), y, cfg.svm, alpha0=solution.alpha)
            previous = trace[-1]
            trace.append(solution.objective)
            logger.debug("MKL iteration", extra={"iteration": len(trace), "objective": solution.objective,
                                                 "betas": betas})
            if abs(solution.objective - previous) <= cfg.outer_tol * max(abs(previous), 1e-12):
                converged = True
                break
        if not converged:
            logger.warning("MKL stopped at the outer iteration cap",
                           extra={"iterations": len(trace), "objective": trace[-1]})
    return betas, solution, trace, converged


def assemble_model(per_view_vectors: Mapping[str, Sequence[SparseVector]], labels: Sequence[int],
                   betas: Mapping[str, float], solution: DualSolution, cfg: MklConfig,
                   uniform: bool = False) -> MklModel:
    """ Composite primal weights W = concat_v sqrt(beta_v) sum_i alpha_i y_i x_i,v """
    y = check_binary_labels(labels)
    views = sorted(per_view_vectors)
    blocks, offsets, start = [], {}, 0
    for view in views:
        vectors = per_view_vectors[view]
        dimension = vectors[0].dimension if vectors else 0
        weights = primal_weights(solution, y, vectors) if vectors else SparseVector.zeros(dimension)
        blocks.append(weights.scale(np.sqrt(betas[view])))
        offsets[view] = (start, dimension)
        start += dimension
    return MklModel(betas=dict(betas), alpha=solution, composite_weights=concatenate(blocks), view_offsets=offsets,
                    config=cfg, uniform=uniform, labels=[int(label) for label in y])


def mkl_train(per_view_vectors: Mapping[str, Sequence[SparseVector]], labels: Sequence[int],
              cfg: MklConfig = MklConfig(), uniform: bool = False, n_jobs: int = 1) -> MklModel:
    """ Learn view weights and support coefficients jointly
    Args:
        per_view_vectors: view -> one embedding per training sample
        labels: -1/+1 labels
        cfg: hyperparameters
        uniform: fix the weights to 1/|V|
        n_jobs: joblib workers for the Gram matrices

    Returns:
        MklModel without featurization state

    Raises:
        SingleClassError: raise if a single class is present
    """
    y = check_binary_labels(labels)
    views = _check_views(per_view_vectors, y.size)
    kernels = {view: kernel_matrix(per_view_vectors[view], n_jobs=n_jobs) for view in views}
    betas, solution, trace, converged = alternate(kernels, y, cfg, uniform=uniform)
    model = assemble_model(per_view_vectors, y, betas, solution, cfg, uniform=uniform)
    model.objective_trace = trace
    model.converged = converged
    logger.info("Trained kernel combination", extra={"betas": betas, "iterations": len(trace),
                                                     "objective": trace[-1], "uniform": uniform})
    return model


def uniform_combine(per_view_vectors: Mapping[str, Sequence[SparseVector]], labels: Sequence[int],
                    cfg: MklConfig = MklConfig(), n_jobs: int = 1) -> MklModel:
    """Mean of the base kernels with a single SVM solve"""
    return mkl_train(per_view_vectors, labels, cfg, uniform=True, n_jobs=n_jobs)


def composite_embed(sample_views: Mapping[str, SparseVector], model: MklModel) -> SparseVector:
    """ X = concat_v sqrt(beta_v) x_v laid out by the model's view offsets
    Raises:
        MissingViewError: raise if a model view is absent
        DimensionMismatchError: raise if a view vector does not fit its block
    """
    blocks = []
    for view in model.views:
        if view not in sample_views:
            raise MissingViewError(f"sample lacks view {view!r}")
        vector = sample_views[view]
        _, length = model.view_offsets[view]
        if vector.dimension != length:
            raise DimensionMismatchError(f"view {view!r} vector has dimension {vector.dimension}, model expects {length}")
        blocks.append(vector.scale(np.sqrt(model.betas[view])))
    return concatenate(blocks)


def decision_value(model: MklModel, composite: SparseVector) -> float:
    """Raw score <W, X>"""
    return model.composite_weights.dot(composite)
