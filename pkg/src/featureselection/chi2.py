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


"""Chi-squared ranking of binary feature presence against the class label"""
import logging

from dataclasses import dataclass, field
from typing import Any, Dict, List, Mapping, Optional, Sequence

import numpy as np
import pandas as pd

from src.cwlk.embedding import NodeFeatureTrace
from src.cwlk.sparse_vector import SparseVector, stack_vectors
from src.cwlk.vocabulary import Vocabulary
from src.exceptions.kernel_exception import DimensionMismatchError
from src.exceptions.learning_exception import InvalidConfigError, SingleClassError
from src.utility import atomic_write, check_binary_labels

logger = logging.getLogger(__name__)


@dataclass
class SelectionMask:
    """ Features kept for one view

    Here is a list of available attributes of "SelectionMask" class:
        * view: view name
        * kept: original feature indices, by descending score then ascending index
        * scores: original feature index -> chi-squared statistic, for every feature
        * dimension: size of the original feature space
    """
    view: str = ""
    kept: List[int] = field(default_factory=list)
    scores: Dict[int, float] = field(default_factory=dict)
    dimension: int = 0

    def __len__(self) -> int:
        return len(self.kept)

    def to_dict(self) -> Dict[str, Any]:
        return {"view": self.view, "kept": [int(index) for index in self.kept],
                "scores": [float(self.scores.get(index, 0.)) for index in range(self.dimension)],
                "dimension": self.dimension}

    @classmethod
    def from_dict(cls, document: Mapping[str, Any]) -> "SelectionMask":
        scores = {index: float(score) for index, score in enumerate(document["scores"])}
        return cls(view=document["view"], kept=[int(index) for index in document["kept"]],
                   scores=scores, dimension=int(document["dimension"]))


def chi2_scores(vectors: Sequence[SparseVector], labels: Sequence[int]) -> np.ndarray:
    """ Statistic of the 2x2 presence/class contingency table of every feature

    Notes:
        * N (ad - bc)^2 / ((a + b)(c + d)(a + c)(b + d)) without continuity correction
        * A table with an empty row or column scores 0
    """
    y = check_binary_labels(labels)
    presence = stack_vectors(vectors)
    presence.data = (presence.data > 0).astype(np.float64)
    presence.eliminate_zeros()
    positive = y == 1
    n_total = float(y.size)
    n_positive = float(positive.sum())
    n_negative = n_total - n_positive
    a = np.asarray(presence[positive].sum(axis=0)).ravel()
    b = np.asarray(presence[~positive].sum(axis=0)).ravel()
    c = n_positive - a
    d = n_negative - b
    denominator = (a + b) * (c + d) * (a + c) * (b + d)
    numerator = n_total * (a * d - b * c) ** 2
    scores = np.zeros_like(numerator)
    nonzero = denominator > 0
    scores[nonzero] = numerator[nonzero] / denominator[nonzero]
    return scores


def chi2_select(vectors: Sequence[SparseVector], labels: Sequence[int], k: int, view: str = "") -> SelectionMask:
    """ Keep the k features whose presence depends most on the class
    Args:
        vectors: training embeddings of one view
        labels: -1/+1 labels
        k: number of features to keep
        view: view name recorded in the mask

    Returns:
        SelectionMask

    Raises:
        InvalidConfigError: raise if k < 1
        SingleClassError: raise if fewer than two samples or a single class is given
    """
    if isinstance(k, bool) or not isinstance(k, (int, np.integer)) or k < 1:
        raise InvalidConfigError(f"k must be a positive integer, got {k!r}")
    if len(vectors) != len(labels):
        raise DimensionMismatchError(f"{len(vectors)} vectors but {len(labels)} labels")
    y = check_binary_labels(labels)
    if y.size < 2 or np.unique(y).size < 2:
        raise SingleClassError("chi-squared selection needs samples of both classes")
    scores = chi2_scores(vectors, y)
    order = np.lexsort((np.arange(scores.size), -scores))
    kept = [int(index) for index in order[:k]]
    logger.debug("Selected features", extra={"view": view, "kept": len(kept), "dimension": int(scores.size)})
    return SelectionMask(view=view, kept=kept, scores={index: float(score) for index, score in enumerate(scores)},
                         dimension=int(scores.size))


def _check_mask(mask: SelectionMask, dimension: int) -> None:
    if mask.dimension != dimension:
        raise DimensionMismatchError(f"mask of view {mask.view!r} expects dimension {mask.dimension}, "
                                     f"got {dimension}")


def apply_mask(vector: SparseVector, mask: SelectionMask) -> SparseVector:
    """ Project a vector on the kept features, renumbered 0..len(kept)-1 in kept order
    Raises:
        DimensionMismatchError: raise if the vector is not in the mask's original space
    """
    _check_mask(mask, vector.dimension)
    kept = np.asarray(mask.kept, dtype=np.int64)
    if kept.size == 0:
        return SparseVector.zeros(0)
    new_positions = np.full(mask.dimension, -1, dtype=np.int64)
    new_positions[kept] = np.arange(kept.size)
    remapped = new_positions[vector.indices]
    keep = remapped >= 0
    return SparseVector(remapped[keep], vector.values[keep], kept.size)


def apply_mask_to_trace(trace: NodeFeatureTrace, mask: SelectionMask) -> NodeFeatureTrace:
    """Remap a node trace exactly like apply_mask remaps its vector"""
    _check_mask(mask, trace.dimension)
    return trace.remap(mask.kept)


def save_mask(mask: SelectionMask, path: str, vocabulary: Optional[Vocabulary] = None) -> None:
    """ Write "new_index<TAB>old_index<TAB>label<TAB>score" lines
    Args:
        mask:
        path:
        vocabulary: source of the readable labels; empty labels when absent
    """
    labels = [vocabulary.readable(index) if vocabulary is not None else "" for index in mask.kept]
    frame = pd.DataFrame({"new_index": range(len(mask.kept)), "old_index": mask.kept, "label": labels,
                          "score": [format(mask.scores.get(index, 0.), ".17g") for index in mask.kept]})
    with atomic_write(path) as handle:
        frame.to_csv(handle, sep="\t", header=False, index=False, lineterminator="\n")
