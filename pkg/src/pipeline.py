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


"""Corpus featurization shared by training, prediction and kernel export"""
import dataclasses
import logging

from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Tuple

from joblib import Parallel, delayed

from src.constant import Defaults
from src.cwlk.config import CwlConfig
from src.cwlk.embedding import NodeFeatureTrace, embed, normalize_vector
from src.cwlk.features import FeatureCounts, count_all
from src.cwlk.sparse_vector import SparseVector
from src.cwlk.vocabulary import Vocabulary, vocabulary_from_counts
from src.exceptions.learning_exception import InvalidConfigError, MissingViewError
from src.featureselection.chi2 import SelectionMask, apply_mask, apply_mask_to_trace, chi2_select
from src.graphmodel.graph import ContextualGraph, Dataset, Sample
from src.mkl.mkl import MklConfig, MklModel, mkl_train

logger = logging.getLogger(__name__)

ViewEmbedding = Tuple[SparseVector, NodeFeatureTrace]


@dataclass
class ViewFeatures:
    """ Featurized samples of one view

    Here is a list of available attributes of "ViewFeatures" class:
        * view: view name
        * vocabulary: full vocabulary of the view
        * mask: chi-squared selection, None when the whole vocabulary is kept
        * vectors: masked and (optionally) normalized embeddings, dataset order
        * traces: node traces parallel to vectors
    """
    view: str
    vocabulary: Vocabulary
    mask: Optional[SelectionMask] = None
    vectors: List[SparseVector] = field(default_factory=list)
    traces: List[NodeFeatureTrace] = field(default_factory=list)

    @property
    def scales(self) -> List[float]:
        return [trace.scale for trace in self.traces]

    @property
    def dimension(self) -> int:
        return len(self.mask) if self.mask is not None else len(self.vocabulary)


class MultiViewFeaturizer:
    """ Embeds samples with fitted per-view vocabularies and selection masks

    An example of using MultiViewFeaturizer::

        featurizer = fit_featurizer(train_set, CwlConfig(h=2), k_select=5000)
        per_view = featurizer.transform(sample)   # view -> (vector, trace)
    """

    def __init__(self, cfg: CwlConfig, vocabularies: Mapping[str, Vocabulary],
                 masks: Optional[Mapping[str, Optional[SelectionMask]]] = None, n_jobs: int = 1) -> None:
        self.cfg = cfg
        self.vocabularies = dict(sorted(vocabularies.items()))
        self.masks = {view: (masks or {}).get(view) for view in self.vocabularies}
        self.n_jobs = n_jobs
        self.training_features: Dict[str, ViewFeatures] = {}

    @classmethod
    def from_model(cls, model: MklModel, n_jobs: int = 1) -> "MultiViewFeaturizer":
        if model.cwl_config is None:
            raise InvalidConfigError("model carries no relabeling configuration")
        return cls(model.cwl_config, model.vocabularies, model.masks, n_jobs=n_jobs)

    @property
    def views(self) -> List[str]:
        return list(self.vocabularies)

    def transform_graph(self, graph: ContextualGraph, view: str,
                        counts: Optional[FeatureCounts] = None) -> ViewEmbedding:
        """ Embed, mask, then normalize one graph

        Notes:
            * Normalization happens after masking, so selected vectors keep unit length
        """
        vector, trace = embed(graph, self.vocabularies[view], dataclasses.replace(self.cfg, normalize=False), counts)
        mask = self.masks.get(view)
        if mask is not None:
            vector, trace = apply_mask(vector, mask), apply_mask_to_trace(trace, mask)
        if self.cfg.normalize:
            vector, scale = normalize_vector(vector)
            trace = trace.with_scale(scale)
        return vector, trace

    def transform(self, sample: Sample) -> Dict[str, ViewEmbedding]:
        """ Embed every model view of a sample
        Raises:
            MissingViewError: raise if the sample lacks a view
        """
        result = {}
        for view in self.views:
            if view not in sample.views:
                raise MissingViewError(f"sample {sample.id!r} lacks view {view!r}")
            result[view] = self.transform_graph(sample.views[view], view)
        return result

    def transform_dataset(self, dataset: Dataset) -> Dict[str, ViewFeatures]:
        if self.n_jobs == 1 or len(dataset) < 2:
            embedded = [self.transform(sample) for sample in dataset]
        else:
            embedded = Parallel(n_jobs=self.n_jobs)(delayed(self.transform)(sample) for sample in dataset)
        features = {}
        for view in self.views:
            features[view] = ViewFeatures(view=view, vocabulary=self.vocabularies[view], mask=self.masks[view],
                                          vectors=[item[view][0] for item in embedded],
                                          traces=[item[view][1] for item in embedded])
        return features


def fit_featurizer(dataset: Dataset, cfg: CwlConfig, k_select: Optional[int] = Defaults.K_SELECT.value,
                   n_jobs: int = 1) -> MultiViewFeaturizer:
    """ Fit vocabularies and selection masks on labeled training samples
    Args:
        dataset: training samples
        cfg: relabeling options
        k_select: chi-squared selection is applied to views whose vocabulary exceeds it; None disables it
        n_jobs: joblib workers

    Returns:
        MultiViewFeaturizer whose training_features hold the embedded training samples
    """
    labels = dataset.labels()
    raw_cfg = dataclasses.replace(cfg, normalize=False)
    vocabularies, masks, raw_counts = {}, {}, {}
    for view in dataset.view_names:
        graphs = dataset.graphs(view)
        counts = count_all(graphs, cfg, n_jobs)
        vocabulary = vocabulary_from_counts(counts, cfg, view)
        vocabularies[view], raw_counts[view] = vocabulary, counts
        masks[view] = None
        if k_select is not None and len(vocabulary) > k_select:
            raw = [embed(graph, vocabulary, raw_cfg, item)[0] for graph, item in zip(graphs, counts)]
            masks[view] = chi2_select(raw, labels, k_select, view)
        logger.info("Fitted view", extra={"view": view, "vocabulary": len(vocabulary),
                                          "selected": len(masks[view]) if masks[view] is not None else None})

    featurizer = MultiViewFeaturizer(cfg, vocabularies, masks, n_jobs=n_jobs)
    for view in featurizer.views:
        embedded = [featurizer.transform_graph(graph, view, item)
                    for graph, item in zip(dataset.graphs(view), raw_counts[view])]
        featurizer.training_features[view] = ViewFeatures(view=view, vocabulary=vocabularies[view],
                                                          mask=masks[view],
                                                          vectors=[vector for vector, _ in embedded],
                                                          traces=[trace for _, trace in embedded])
    return featurizer


def train_model(dataset: Dataset, cwl_cfg: CwlConfig = CwlConfig(), mkl_cfg: MklConfig = MklConfig(),
                k_select: Optional[int] = Defaults.K_SELECT.value, uniform: bool = False,
                n_jobs: int = 1) -> MklModel:
    """ Featurize a labeled dataset and learn the kernel combination
    Args:
        dataset: labeled training samples
        cwl_cfg: relabeling options
        mkl_cfg: combination hyperparameters
        k_select: chi-squared budget per view
        uniform: fix the view weights to 1/|V|
        n_jobs: joblib workers

    Returns:
        MklModel carrying everything prediction needs
    """
    featurizer = fit_featurizer(dataset, cwl_cfg, k_select, n_jobs)
    features = featurizer.training_features
    model = mkl_train({view: item.vectors for view, item in features.items()}, dataset.labels(), mkl_cfg,
                      uniform=uniform, n_jobs=n_jobs)
    model.sample_ids = dataset.ids
    model.cwl_config = cwl_cfg
    model.vocabularies = dict(featurizer.vocabularies)
    model.masks = dict(featurizer.masks)
    model.vocabulary_sizes = {view: (len(item.vocabulary), item.dimension) for view, item in features.items()}
    return model
