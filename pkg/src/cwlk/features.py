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


"""Per-node contextual label counts of one graph"""
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

from joblib import Parallel, delayed

from src.cwlk.config import CwlConfig
from src.cwlk.relabel import LabelCodec, contextual_relabel
from src.graphmodel.graph import ContextualGraph


@dataclass
class FeatureCounts:
    """ Occurrences of every contextual label, attributed to the emitting node

    Here is a list of available attributes of "FeatureCounts" class:
        * node_counts: node id -> contextual label -> occurrences over heights 0..h
        * codec: compressed label structure, only when relabeling was compressed
    """
    node_counts: Dict[str, Counter] = field(default_factory=dict)
    codec: Optional[LabelCodec] = None

    def labels(self) -> set:
        found = set()
        for counts in self.node_counts.values():
            found.update(counts)
        return found

    def totals(self) -> Counter:
        total = Counter()
        for counts in self.node_counts.values():
            total.update(counts)
        return total


def count_features(g: ContextualGraph, cfg: CwlConfig) -> FeatureCounts:
    """ Relabel a graph and count contextual labels per node
    Args:
        g: graph
        cfg: relabeling options

    Returns:
        FeatureCounts; every node of g has an entry, possibly empty
    """
    codec = LabelCodec() if cfg.compress else None
    sequence = contextual_relabel(g, cfg.h, compress=cfg.compress, use_contexts=cfg.use_contexts,
                                  separate_heights=cfg.separate_heights, codec=codec)
    node_counts = {node.id: Counter() for node in g.nodes}
    for per_node in sequence:
        for node_id, labels in per_node.items():
            node_counts[node_id].update(labels)
    return FeatureCounts(node_counts=node_counts, codec=codec)


def count_all(graphs: Sequence[ContextualGraph], cfg: CwlConfig, n_jobs: int = 1) -> List[FeatureCounts]:
    """Count features of many graphs, in parallel with joblib when n_jobs != 1"""
    if n_jobs == 1 or len(graphs) < 2:
        return [count_features(g, cfg) for g in graphs]
    return Parallel(n_jobs=n_jobs)(delayed(count_features)(g, cfg) for g in graphs)
