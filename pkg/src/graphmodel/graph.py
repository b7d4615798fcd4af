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


"""Context annotated graphs, multi-view samples and datasets"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from src.exceptions.dataset_exception import DatasetInvariantError, ViewMismatchError

Edge = Tuple[str, str]


@dataclass(frozen=True)
class NodeRecord:
    """ One node of a program representation graph

    Here is a list of available attributes of "NodeRecord" class:
        * id: human readable node id, e.g. ``Class.method@bb7``
        * labels: sorted, duplicate free node labels
        * contexts: reachability contexts of the node
        * method: optional method group id
        * klass: optional class group id
    """
    id: str
    labels: Tuple[str, ...]
    contexts: FrozenSet[str]
    method: Optional[str] = None
    klass: Optional[str] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "contexts", frozenset(self.contexts))
        if not isinstance(self.id, str) or not self.id:
            raise DatasetInvariantError(None, f"node id must be a non-empty string, got {self.id!r}")
        if not self.labels:
            raise DatasetInvariantError(None, f"node {self.id!r} has no label")
        if any(not isinstance(label, str) for label in self.labels):
            raise DatasetInvariantError(None, f"node {self.id!r} has a non-string label")
        if list(self.labels) != sorted(set(self.labels)):
            raise DatasetInvariantError(None, f"labels of node {self.id!r} are not sorted and duplicate free")
        if not self.contexts:
            raise DatasetInvariantError(None, f"node {self.id!r} has no context")
        if any(not isinstance(context, str) or not context for context in self.contexts):
            raise DatasetInvariantError(None, f"node {self.id!r} has an invalid context")

    @property
    def sorted_contexts(self) -> List[str]:
        return sorted(self.contexts)


@dataclass(frozen=True)
class ContextualGraph:
    """ Directed graph with per-node labels, contexts and group tags

    Notes:
        * Nodes are kept sorted by id and edges sorted lexicographically, so two graphs with the same
          content compare equal regardless of input order
        * Self loops are ordinary edges; duplicate edges and undirected input are rejected
    """
    nodes: Tuple[NodeRecord, ...] = ()
    edges: Tuple[Edge, ...] = ()
    directed: bool = True

    def __post_init__(self) -> None:
        if not self.directed:
            raise DatasetInvariantError(None, "undirected graphs are not supported")
        nodes = tuple(sorted(self.nodes, key=lambda node: node.id))
        edges = tuple(sorted((str(src), str(dst)) for src, dst in self.edges))
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "edges", edges)

        ids = [node.id for node in nodes]
        if len(set(ids)) != len(ids):
            duplicated = sorted({node_id for node_id in ids if ids.count(node_id) > 1})
            raise DatasetInvariantError(None, f"duplicate node ids {duplicated}")
        known = set(ids)
        for src, dst in edges:
            if src not in known or dst not in known:
                raise DatasetInvariantError(None, f"edge ({src!r}, {dst!r}) references an unknown node")
        for previous, current in zip(edges, edges[1:]):
            if previous == current:
                raise DatasetInvariantError(None, f"duplicate edge {current}")

    @cached_property
    def node_index(self) -> Dict[str, int]:
        """Dense per-graph index of every node id"""
        return {node.id: index for index, node in enumerate(self.nodes)}

    @cached_property
    def successors(self) -> Tuple[Tuple[int, ...], ...]:
        """Successor dense indices of every node, in edge order"""
        index = self.node_index
        out: List[List[int]] = [[] for _ in self.nodes]
        for src, dst in self.edges:
            out[index[src]].append(index[dst])
        return tuple(tuple(item) for item in out)


@dataclass(frozen=True)
class Sample:
    """ One labeled (or unlabeled) sample seen through several views

    Here is a list of available attributes of "Sample" class:
        * id: sample id
        * label: -1 benign, +1 malicious, None when unlabeled
        * views: view name -> ContextualGraph
        * malice_groups: ground truth malicious class group ids, localization evaluation only
    """
    id: str
    label: Optional[int]
    views: Mapping[str, ContextualGraph] = field(default_factory=dict)
    malice_groups: Optional[FrozenSet[str]] = None

    def __post_init__(self) -> None:
        if not isinstance(self.id, str) or not self.id:
            raise DatasetInvariantError(None, f"sample id must be a non-empty string, got {self.id!r}")
        if self.label is not None and (isinstance(self.label, bool) or self.label not in (-1, 1)):
            raise DatasetInvariantError(self.id, f"label must be -1, +1 or null, got {self.label!r}")
        object.__setattr__(self, "views", dict(sorted(self.views.items())))
        if self.malice_groups is not None:
            object.__setattr__(self, "malice_groups", frozenset(self.malice_groups))

    @property
    def view_names(self) -> Tuple[str, ...]:
        return tuple(self.views)

    def node_groups(self) -> Dict[str, Tuple[Optional[str], Optional[str]]]:
        """ Method and class tags of every node id across all views

        Notes:
            * When one id appears in several views, the tags of the first view in name order win
        """
        groups: Dict[str, Tuple[Optional[str], Optional[str]]] = {}
        for graph in self.views.values():
            for node in graph.nodes:
                groups.setdefault(node.id, (node.method, node.klass))
        return groups

    def class_ids(self) -> List[str]:
        """Sorted distinct class tags of the sample, untagged nodes excluded"""
        return sorted({klass for _, klass in self.node_groups().values() if klass is not None})


@dataclass(frozen=True)
class Dataset:
    """ Ordered collection of samples sharing one set of view names

    Notes:
        * Sample order is the row/column order of every kernel matrix
    """
    samples: Tuple[Sample, ...] = ()
    view_names: Tuple[str, ...] = ()

    def __post_init__(self) -> None:
        samples = tuple(self.samples)
        object.__setattr__(self, "samples", samples)
        if not samples:
            object.__setattr__(self, "view_names", tuple(self.view_names))
            return
        view_names = tuple(sorted(self.view_names)) if self.view_names else samples[0].view_names
        object.__setattr__(self, "view_names", view_names)
        if not view_names:
            raise DatasetInvariantError(samples[0].id, "a dataset needs at least one view")
        seen = set()
        for sample in samples:
            if sample.id in seen:
                raise DatasetInvariantError(sample.id, "duplicate sample id")
            seen.add(sample.id)
            if sample.view_names != view_names:
                raise ViewMismatchError(sample.id, f"views {list(sample.view_names)} differ from {list(view_names)}")

    def __len__(self) -> int:
        return len(self.samples)

    def __iter__(self):
        return iter(self.samples)

    @cached_property
    def _positions(self) -> Dict[str, int]:
        return {sample.id: position for position, sample in enumerate(self.samples)}

    def sample(self, sample_id: str) -> Sample:
        return self.samples[self._positions[sample_id]]

    @property
    def ids(self) -> List[str]:
        return [sample.id for sample in self.samples]

    def labels(self) -> np.ndarray:
        """ Labels as an int array

        Raises:
            DatasetInvariantError: raise if a sample is unlabeled
        """
        for sample in self.samples:
            if sample.label is None:
                raise DatasetInvariantError(sample.id, "sample is unlabeled")
        return np.array([sample.label for sample in self.samples], dtype=np.int64)

    def subset(self, positions: Iterable[int]) -> "Dataset":
        return Dataset(tuple(self.samples[int(i)] for i in positions), self.view_names)

    def graphs(self, view: str) -> List[ContextualGraph]:
        return [sample.views[view] for sample in self.samples]


def make_graph(nodes: Sequence[NodeRecord], edges: Iterable[Edge]) -> ContextualGraph:
    return ContextualGraph(tuple(nodes), tuple(edges))
