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


""" Decomposition of the primal decision value over graph nodes

Because the classifier has no intercept, the raw score splits exactly::

    <W, X> = sum_v sum_f W[offset_v + f] * sqrt(beta_v) * scale_v * sum_n x_{n,v}^f

and the inner sum is attributed node by node.
"""
import logging

from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Tuple

from joblib import Parallel, delayed

from src.constant import Defaults
from src.cwlk.embedding import NodeFeatureTrace
from src.exceptions.learning_exception import MissingViewError
from src.graphmodel.graph import Dataset, Sample
from src.mkl.mkl import MklModel, composite_embed, decision_value
from src.pipeline import MultiViewFeaturizer

logger = logging.getLogger(__name__)

UNTAGGED = Defaults.UNTAGGED_GROUP.value

Ranking = List[Tuple[str, float]]


@dataclass
class MScoreReport:
    """ Scores of one sample

    Here is a list of available attributes of "MScoreReport" class:
        * sample_id: sample id
        * prediction: -1 or +1
        * raw_score: <W, X>
        * node_scores: node id -> combined m-score
        * method_scores: method group -> m-score
        * class_scores: class group -> m-score
        * per_view_node_scores: view -> node id -> m-score
        * ranked_classes: (class group, score), descending score then ascending group id
        * per_view_ranked_classes: view -> class ranking computed from that view's node scores only
    """
    sample_id: str
    prediction: int
    raw_score: float
    node_scores: Dict[str, float] = field(default_factory=dict)
    method_scores: Dict[str, float] = field(default_factory=dict)
    class_scores: Dict[str, float] = field(default_factory=dict)
    per_view_node_scores: Dict[str, Dict[str, float]] = field(default_factory=dict)
    ranked_classes: Ranking = field(default_factory=list)
    per_view_ranked_classes: Dict[str, Ranking] = field(default_factory=dict)

    def top_classes(self, k: int = Defaults.TOP_K.value) -> Ranking:
        return self.ranked_classes[:k]


def per_view_mscores(traces: Mapping[str, NodeFeatureTrace], model: MklModel,
                     scales: Optional[Mapping[str, float]] = None) -> Dict[str, Dict[str, float]]:
    """ Node scores contributed by every view
    Args:
        traces: view -> node trace of the (masked) embedding
        model: trained model
        scales: view -> normalization factor, defaults to the traces' own scale

    Returns:
        view -> node id -> score
    """
    scores = {}
    for view in model.views:
        if view not in traces:
            raise MissingViewError(f"no trace for view {view!r}")
        trace = traces[view]
        scale = trace.scale if scales is None else scales[view]
        weights = model.view_weights(view).to_dict()
        factor = (model.betas[view] ** 0.5) * scale
        view_scores = {}
        for node_id, counts in trace.node_counts.items():
            view_scores[node_id] = factor * sum(weights.get(index, 0.) * count for index, count in counts.items())
        scores[view] = view_scores
    return scores


def merge_views(per_view: Mapping[str, Mapping[str, float]]) -> Dict[str, float]:
    """Sum node scores of nodes sharing an id across views"""
    merged: Dict[str, float] = {}
    for view in sorted(per_view):
        for node_id, score in per_view[view].items():
            merged[node_id] = merged.get(node_id, 0.) + score
    return dict(sorted(merged.items()))


def award_mscores(traces: Mapping[str, NodeFeatureTrace], model: MklModel,
                  scales: Optional[Mapping[str, float]] = None) -> Dict[str, float]:
    """ Combined m-score of every node

    Notes:
        * A feature emitted by several nodes is split by their local counts, so the scores add up to <W, X>
    """
    return merge_views(per_view_mscores(traces, model, scales))


def aggregate_groups(node_scores: Mapping[str, float], sample: Sample) -> Tuple[Dict[str, float], Dict[str, float]]:
    """ Method and class sums of node scores
    Args:
        node_scores: node id -> score
        sample: source of the method and class tags

    Returns:
        method scores and class scores; untagged nodes are collected under "(untagged)"
    """
    groups = sample.node_groups()
    methods: Dict[str, float] = {}
    classes: Dict[str, float] = {}
    for node_id, score in node_scores.items():
        method, klass = groups.get(node_id, (None, None))
        method = UNTAGGED if method is None else method
        klass = UNTAGGED if klass is None else klass
        methods[method] = methods.get(method, 0.) + score
        classes[klass] = classes.get(klass, 0.) + score
    return dict(sorted(methods.items())), dict(sorted(classes.items()))


def rank_groups(group_scores: Mapping[str, float]) -> Ranking:
    return sorted(group_scores.items(), key=lambda item: (-item[1], item[0]))


def predict_and_interpret(sample: Sample, model: MklModel,
                          featurizer: Optional[MultiViewFeaturizer] = None) -> MScoreReport:
    """ Predict a sample and attribute its raw score to nodes, methods and classes
    Args:
        sample: sample carrying every model view
        model: trained model
        featurizer: MultiViewFeaturizer of the model, built from the model when None

    Returns:
        MScoreReport, scores filled for either prediction

    Raises:
        MissingViewError: raise if the sample lacks a model view
        TracePartitionError: raise if a node trace disagrees with its embedding
    """
    if featurizer is None:
        featurizer = MultiViewFeaturizer.from_model(model)
    embedded = featurizer.transform(sample)
    for vector, trace in embedded.values():
        trace.check_partition(vector)
    composite = composite_embed({view: vector for view, (vector, _) in embedded.items()}, model)
    raw = decision_value(model, composite)
    per_view = per_view_mscores({view: trace for view, (_, trace) in embedded.items()}, model)
    node_scores = merge_views(per_view)
    method_scores, class_scores = aggregate_groups(node_scores, sample)
    per_view_ranked = {view: rank_groups(aggregate_groups(scores, sample)[1]) for view, scores in per_view.items()}
    report = MScoreReport(sample_id=sample.id, prediction=1 if raw > 0. else -1, raw_score=raw,
                          node_scores=node_scores, method_scores=method_scores, class_scores=class_scores,
                          per_view_node_scores=per_view, ranked_classes=rank_groups(class_scores),
                          per_view_ranked_classes=per_view_ranked)
    logger.debug("Scored sample", extra={"sample_id": sample.id, "raw": raw, "prediction": report.prediction})
    return report


def interpret_dataset(dataset: Dataset, model: MklModel, n_jobs: int = 1) -> List[MScoreReport]:
    """ Reports of every sample of a dataset, in dataset order """
    featurizer = MultiViewFeaturizer.from_model(model, n_jobs=1)
    if n_jobs == 1 or len(dataset) < 2:
        return [predict_and_interpret(sample, model, featurizer) for sample in dataset]
    return Parallel(n_jobs=n_jobs)(delayed(predict_and_interpret)(sample, model, featurizer) for sample in dataset)
