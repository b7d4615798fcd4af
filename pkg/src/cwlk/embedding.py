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


"""Explicit sparse embeddings and node-local feature traces"""
from dataclasses import dataclass, field
from typing import Dict, Mapping, Optional, Sequence, Tuple

import numpy as np

from src.constant import Tolerance
from src.cwlk.config import CwlConfig
from src.cwlk.features import FeatureCounts, count_features
from src.cwlk.sparse_vector import SparseVector
from src.cwlk.vocabulary import Vocabulary
from src.exceptions.kernel_exception import DimensionMismatchError, TracePartitionError
from src.graphmodel.graph import ContextualGraph
from src.utility import atomic_write


@dataclass
class NodeFeatureTrace:
    """ Node-local feature counts of one embedded graph

    Here is a list of available attributes of "NodeFeatureTrace" class:
        * node_counts: node id -> feature index -> local count
        * dimension: feature space size
        * scale: factor the embedded vector was multiplied with (1.0 when not normalized)
    """
    node_counts: Dict[str, Dict[int, float]] = field(default_factory=dict)
    dimension: int = 0
    scale: float = 1.0

    def totals(self) -> SparseVector:
        """Unscaled feature counts summed over nodes"""
        total: Dict[int, float] = {}
        for counts in self.node_counts.values():
            for index, count in counts.items():
                total[index] = total.get(index, 0.) + count
        return SparseVector.from_dict(total, self.dimension)

    def check_partition(self, vector: SparseVector) -> None:
        """ Verify node counts add up to the embedded vector
        Raises:
            TracePartitionError: raise if some feature total differs
        """
        if vector.dimension != self.dimension:
            raise TracePartitionError(f"trace dimension {self.dimension} != vector dimension {vector.dimension}")
        expected = self.totals().scale(self.scale).to_dense()
        if not np.allclose(expected, vector.to_dense(), rtol=Tolerance.PARTITION.value,
                           atol=Tolerance.PARTITION.value):
            raise TracePartitionError("node-local counts do not add up to the embedded counts")

    def remap(self, kept: Sequence[int]) -> "NodeFeatureTrace":
        """ Restrict to kept features, renumbered by their position in kept
        Raises:
            DimensionMismatchError: raise if an index in kept is out of range
        """
        if any(index < 0 or index >= self.dimension for index in kept):
            raise DimensionMismatchError(f"kept index out of range for dimension {self.dimension}")
        position = {int(index): new for new, index in enumerate(kept)}
        node_counts = {node_id: {position[index]: count for index, count in counts.items() if index in position}
                       for node_id, counts in self.node_counts.items()}
        return NodeFeatureTrace(node_counts, len(kept), self.scale)

    def with_scale(self, scale: float) -> "NodeFeatureTrace":
        return NodeFeatureTrace(self.node_counts, self.dimension, scale)


def normalize_vector(vector: SparseVector) -> Tuple[SparseVector, float]:
    """ Cosine normalization
    Args:
        vector:

    Returns:
        unit vector and the factor applied; a zero vector stays zero with factor 1.0
    """
    norm = vector.norm()
    if norm == 0.:
        return vector, 1.0
    scale = 1.0 / norm
    return vector.scale(scale), scale


def embed(g: ContextualGraph, vocabulary: Vocabulary, cfg: CwlConfig,
          counts: Optional[FeatureCounts] = None) -> Tuple[SparseVector, NodeFeatureTrace]:
    """ Explicit CWL embedding of a graph in the space of a vocabulary
    Args:
        g: graph
        vocabulary: feature space
        cfg: relabeling options, must match the vocabulary
        counts: precomputed count_features(g, cfg)

    Returns:
        vector of occurrence counts over heights 0..h (unit length when cfg.normalize) and the node trace

    Notes:
        * Labels missing from the vocabulary are dropped
        * Trace counts stay raw; trace.scale records the normalization factor
    """
    vocabulary.check_compatible(cfg)
    if counts is None:
        counts = count_features(g, cfg)
    node_counts: Dict[str, Dict[int, float]] = {}
    totals: Dict[int, float] = {}
    for node_id, labels in counts.node_counts.items():
        local: Dict[int, float] = {}
        for label, count in labels.items():
            index = vocabulary.get(label)
            if index is None:
                continue
            local[index] = float(count)
            totals[index] = totals.get(index, 0.) + count
        node_counts[node_id] = local
    vector = SparseVector.from_dict(totals, len(vocabulary))
    scale = 1.0
    if cfg.normalize:
        vector, scale = normalize_vector(vector)
    return vector, NodeFeatureTrace(node_counts, len(vocabulary), scale)


def export_embeddings(sample_ids: Sequence[str], vectors: Sequence[SparseVector], path: str) -> None:
    """ Write one "sample_id index:value index:value ..." line per vector """
    if len(sample_ids) != len(vectors):
        raise ValueError("one sample id per vector is required")
    with atomic_write(path) as handle:
        for sample_id, vector in zip(sample_ids, vectors):
            pairs = " ".join(f"{index}:{format(value, '.17g')}" for index, value in zip(vector.indices, vector.values))
            handle.write(f"{sample_id} {pairs}".rstrip() + "\n")


def read_embeddings(path: str, dimension: int) -> Mapping[str, SparseVector]:
    vectors = {}
    with open(path, "r", encoding="utf-8") as handle:
        for line in handle:
            sample_id, *pairs = line.split()
            entries = dict((int(index), float(value)) for index, value in (pair.split(":") for pair in pairs))
            vectors[sample_id] = SparseVector.from_dict(entries, dimension)
    return vectors
