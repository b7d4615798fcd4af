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


""" Piggybacking generator

Benign samples are random host programs: classes of methods whose basic blocks form directed
Erdős–Rényi graphs with chain edges. Malicious samples are drawn from the same host distribution and
receive extra rider classes, each carrying one motif instance in the malice context. Optional decoys
put motif copies in the benign context and scatter motif labels, without their edges, in the malice
context, so that only structure and context together separate the classes.
"""
import logging

from dataclasses import dataclass, field
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
import yaml
from joblib import Parallel, delayed

from src.constant import Defaults
from src.exceptions.generator_exception import GeneratorConfigError
from src.graphmodel.graph import ContextualGraph, Dataset, NodeRecord, Sample

logger = logging.getLogger(__name__)

Range = Tuple[int, int]


def _check_range(name: str, value: Sequence[int], minimum: int = 0) -> Range:
    if (not isinstance(value, (list, tuple)) or len(value) != 2
            or any(isinstance(item, bool) or not isinstance(item, (int, np.integer)) for item in value)):
        raise GeneratorConfigError(f"{name} must be a pair of integers, got {value!r}")
    low, high = (int(item) for item in value)
    if low < minimum or high < low:
        raise GeneratorConfigError(f"{name} must satisfy {minimum} <= low <= high, got {value!r}")
    return low, high


@dataclass(frozen=True)
class ViewSpec:
    """ One view of the generated samples

    Here is a list of available attributes of "ViewSpec" class:
        * name: view name
        * alphabet_size: number of ordinary node labels
        * noise: labels independent of the class; never carries motifs nor rider classes
    """
    name: str
    alphabet_size: int = 20
    noise: bool = False

    def __post_init__(self) -> None:
        if not isinstance(self.name, str) or not self.name:
            raise GeneratorConfigError(f"view name must be a non-empty string, got {self.name!r}")
        if isinstance(self.alphabet_size, bool) or not isinstance(self.alphabet_size, int) or self.alphabet_size < 1:
            raise GeneratorConfigError(f"alphabet_size of view {self.name!r} must be a positive integer")
        if not isinstance(self.noise, bool):
            raise GeneratorConfigError(f"noise flag of view {self.name!r} must be a boolean")

    def alphabet(self) -> List[str]:
        return [f"{self.name}{index}" for index in range(self.alphabet_size)]


@dataclass(frozen=True)
class MotifSpec:
    """ Small labeled subgraph planted into rider classes

    Here is a list of available attributes of "MotifSpec" class:
        * name: motif name
        * labels: label list of every motif node
        * edges: (source, target) positions into labels
        * views: views carrying the motif labels, every non-noise view when None
    """
    name: str = "leak"
    labels: Tuple[Tuple[str, ...], ...] = (("sensitive.source",), ("sensitive.transform",), ("sensitive.sink",))
    edges: Tuple[Tuple[int, int], ...] = ((0, 1), (1, 2))
    views: Optional[Tuple[str, ...]] = None

    def __post_init__(self) -> None:
        labels = tuple(tuple(sorted(set(item))) for item in self.labels)
        edges = tuple(sorted({(int(src), int(dst)) for src, dst in self.edges}))
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "edges", edges)
        if self.views is not None:
            object.__setattr__(self, "views", tuple(self.views))
        if not 2 <= len(labels) <= 6:
            raise GeneratorConfigError(f"motif {self.name!r} must have 2 to 6 nodes, got {len(labels)}")
        if any(not item for item in labels):
            raise GeneratorConfigError(f"every node of motif {self.name!r} needs a label")
        if any(not (0 <= src < len(labels) and 0 <= dst < len(labels)) for src, dst in edges):
            raise GeneratorConfigError(f"motif {self.name!r} has an edge outside its nodes")

    @property
    def size(self) -> int:
        return len(self.labels)

    @classmethod
    def from_dict(cls, document: Mapping[str, Any]) -> "MotifSpec":
        unknown = sorted(set(document) - {"name", "labels", "edges", "views"})
        if unknown:
            raise GeneratorConfigError(f"unknown motif keys {unknown}")
        defaults = cls()
        name = document.get("name", defaults.name)
        labels = document.get("labels", defaults.labels)
        edges = document.get("edges", defaults.edges)
        views = document.get("views")
        if not isinstance(name, str) or not name:
            raise GeneratorConfigError(f"motif name must be a non-empty string, got {name!r}")
        if (not isinstance(labels, (list, tuple))
                or any(not isinstance(item, (list, tuple)) or not all(isinstance(label, str) for label in item)
                       for item in labels)):
            raise GeneratorConfigError(f"labels of motif {name!r} must be a list of label lists, got {labels!r}")
        if (not isinstance(edges, (list, tuple))
                or any(not isinstance(edge, (list, tuple)) or len(edge) != 2
                       or not all(isinstance(end, int) and not isinstance(end, bool) for end in edge)
                       for edge in edges)):
            raise GeneratorConfigError(f"edges of motif {name!r} must be pairs of node positions, got {edges!r}")
        if views is not None and (not isinstance(views, (list, tuple))
                                  or not all(isinstance(view, str) for view in views)):
            raise GeneratorConfigError(f"views of motif {name!r} must be a list of view names, got {views!r}")
        return cls(name=name, labels=tuple(tuple(item) for item in labels), edges=tuple(tuple(edge) for edge in edges),
                   views=tuple(views) if views is not None else None)

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "labels": [list(item) for item in self.labels],
                "edges": [list(edge) for edge in self.edges],
                "views": list(self.views) if self.views is not None else None}


@dataclass(frozen=True)
class GenConfig:
    """ Generator settings; the seed fixes every random draw

    Here is a list of available attributes of "GenConfig" class:
        * seed: master seed
        * n_benign, n_malicious: number of samples of each class
        * views: ViewSpec list
        * host_nodes: basic blocks per method
        * host_edge_prob: edge probability inside a method
        * methods_per_class: methods per class
        * call_prob: probability that a method calls another host method
        * motifs: MotifSpec list; rider classes pick one each
        * context_alphabet: contexts of host methods
        * malice_context: context of motif nodes
        * classes_per_app: host classes per sample
        * malice_classes_per_app: rider classes per malicious sample
        * multi_label_prob: probability that a block carries two labels
        * decoy_prob: probability that a sample carries motif decoys
    """
    seed: int = 0
    n_benign: int = 50
    n_malicious: int = 50
    views: Tuple[ViewSpec, ...] = (ViewSpec("api"),)
    host_nodes: Range = (2, 5)
    host_edge_prob: float = 0.3
    methods_per_class: Range = (1, 3)
    call_prob: float = 0.05
    motifs: Tuple[MotifSpec, ...] = (MotifSpec(),)
    context_alphabet: Tuple[str, ...] = (Defaults.BENIGN_CONTEXT.value, Defaults.MALICE_CONTEXT.value)
    malice_context: str = Defaults.MALICE_CONTEXT.value
    classes_per_app: Range = (4, 8)
    malice_classes_per_app: Range = (1, 2)
    multi_label_prob: float = 0.1
    decoy_prob: float = 0.

    def __post_init__(self) -> None:
        if isinstance(self.seed, bool) or not isinstance(self.seed, (int, np.integer)) or not 0 <= self.seed < 2 ** 64:
            raise GeneratorConfigError(f"seed must be a 64-bit non-negative integer, got {self.seed!r}")
        for name in ("n_benign", "n_malicious"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)) or value < 0:
                raise GeneratorConfigError(f"{name} must be a non-negative integer, got {value!r}")
        for name, kind in (("views", ViewSpec), ("motifs", MotifSpec)):
            items = getattr(self, name)
            if (not isinstance(items, (list, tuple))
                    or any(not isinstance(item, (Mapping, kind)) for item in items)):
                raise GeneratorConfigError(f"{name} must be a list of mappings, got {items!r}")
        try:
            views = tuple(ViewSpec(**item) if isinstance(item, Mapping) else item for item in self.views)
        except TypeError as error:
            raise GeneratorConfigError(f"invalid view: {error}") from error
        motifs = tuple(MotifSpec.from_dict(item) if isinstance(item, Mapping) else item for item in self.motifs)
        if (not isinstance(self.context_alphabet, (list, tuple))
                or not all(isinstance(context, str) for context in self.context_alphabet)):
            raise GeneratorConfigError(f"context_alphabet must be a list of strings, got {self.context_alphabet!r}")
        object.__setattr__(self, "views", views)
        object.__setattr__(self, "motifs", motifs)
        object.__setattr__(self, "context_alphabet", tuple(self.context_alphabet))
        object.__setattr__(self, "host_nodes", _check_range("host_nodes", self.host_nodes, 1))
        object.__setattr__(self, "methods_per_class", _check_range("methods_per_class", self.methods_per_class, 1))
        object.__setattr__(self, "classes_per_app", _check_range("classes_per_app", self.classes_per_app, 1))
        object.__setattr__(self, "malice_classes_per_app",
                           _check_range("malice_classes_per_app", self.malice_classes_per_app, 1))
        if not views:
            raise GeneratorConfigError("at least one view is required")
        names = [view.name for view in views]
        if len(set(names)) != len(names):
            raise GeneratorConfigError(f"view names repeat: {names}")
        for name in ("host_edge_prob", "call_prob", "multi_label_prob", "decoy_prob"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or isinstance(value, bool) or not 0 <= value < 1:
                raise GeneratorConfigError(f"{name} must lie in [0, 1), got {value!r}")
        if not 0 < self.host_edge_prob:
            raise GeneratorConfigError("host_edge_prob must lie in (0, 1)")
        if not self.context_alphabet or len(set(self.context_alphabet)) != len(self.context_alphabet):
            raise GeneratorConfigError("context_alphabet must hold distinct contexts")
        if self.malice_context not in self.context_alphabet:
            raise GeneratorConfigError(f"malice_context {self.malice_context!r} is not in the context alphabet")
        if self.decoy_prob > 0 and not self.benign_contexts:
            raise GeneratorConfigError("decoys need a context other than the malice context")
        if self.n_malicious > 0:
            if not self.motifs:
                raise GeneratorConfigError("malicious samples need at least one motif")
            if not self.signal_views:
                raise GeneratorConfigError("malicious samples need a view that is not noise")
        for motif in self.motifs:
            if motif.views is not None:
                unknown = sorted(set(motif.views) - set(self.signal_views))
                if unknown:
                    raise GeneratorConfigError(f"motif {motif.name!r} names unknown or noise views {unknown}")
            if motif.size > self.host_nodes[1] * self.methods_per_class[1]:
                raise GeneratorConfigError(f"motif {motif.name!r} is larger than the largest class")

    @property
    def signal_views(self) -> List[str]:
        return [view.name for view in self.views if not view.noise]

    @property
    def benign_contexts(self) -> List[str]:
        return [context for context in self.context_alphabet if context != self.malice_context]

    @classmethod
    def from_dict(cls, document: Optional[Mapping[str, Any]]) -> "GenConfig":
        document = dict(document or {})
        names = set(cls.__dataclass_fields__)
        unknown = sorted(set(document) - names)
        if unknown:
            raise GeneratorConfigError(f"unknown generator keys {unknown}")
        for key in ("host_nodes", "methods_per_class", "classes_per_app", "malice_classes_per_app"):
            if key in document and not isinstance(document[key], (list, tuple)):
                raise GeneratorConfigError(f"{key} must be a pair of integers")
        try:
            return cls(**document)
        except TypeError as error:
            raise GeneratorConfigError(str(error)) from error

    def to_dict(self) -> Dict[str, Any]:
        return {"seed": int(self.seed), "n_benign": int(self.n_benign), "n_malicious": int(self.n_malicious),
                "views": [{"name": view.name, "alphabet_size": view.alphabet_size, "noise": view.noise}
                          for view in self.views],
                "host_nodes": list(self.host_nodes), "host_edge_prob": self.host_edge_prob,
                "methods_per_class": list(self.methods_per_class), "call_prob": self.call_prob,
                "motifs": [motif.to_dict() for motif in self.motifs],
                "context_alphabet": list(self.context_alphabet), "malice_context": self.malice_context,
                "classes_per_app": list(self.classes_per_app),
                "malice_classes_per_app": list(self.malice_classes_per_app),
                "multi_label_prob": self.multi_label_prob, "decoy_prob": self.decoy_prob}


def load_gen_config(path: str) -> GenConfig:
    """ Read a YAML generator configuration
    Raises:
        GeneratorConfigError: raise if the file is not valid YAML or holds invalid settings
    """
    try:
        with open(path, "r", encoding="utf-8") as handle:
            document = yaml.safe_load(handle)
    except yaml.YAMLError as error:
        raise GeneratorConfigError(f"{path} is not valid YAML: {error}") from error
    if document is not None and not isinstance(document, dict):
        raise GeneratorConfigError(f"{path} must hold a mapping")
    return GenConfig.from_dict(document)


@dataclass
class _Block:
    id: str
    method: str
    klass: str
    contexts: Tuple[str, ...]
    role: str = "host"
    motif_labels: Optional[Tuple[str, ...]] = None
    motif: Optional[MotifSpec] = None


@dataclass
class _Program:
    """Node layout and topology shared by every view of one sample"""
    blocks: List[_Block] = field(default_factory=list)
    edges: List[Tuple[str, str]] = field(default_factory=list)
    malice_groups: List[str] = field(default_factory=list)
    planted: Dict[str, MotifSpec] = field(default_factory=dict)


def _method_blocks(rng: np.random.Generator, cfg: GenConfig, method: str, klass: str, contexts: Tuple[str, ...],
                   role: str, program: _Program) -> List[str]:
    n_blocks = int(rng.integers(cfg.host_nodes[0], cfg.host_nodes[1] + 1))
    ids = [f"{method}@bb{index}" for index in range(n_blocks)]
    for block_id in ids:
        program.blocks.append(_Block(block_id, method, klass, contexts, role))
    host = nx.gnp_random_graph(n_blocks, cfg.host_edge_prob, seed=int(rng.integers(2 ** 31)), directed=True)
    host.add_edges_from((index, index + 1) for index in range(n_blocks - 1))
    program.edges.extend((ids[src], ids[dst]) for src, dst in sorted(host.edges()))
    return ids


def _method_contexts(rng: np.random.Generator, cfg: GenConfig) -> Tuple[str, ...]:
    if len(cfg.context_alphabet) > 1 and rng.random() < 0.1:
        return cfg.context_alphabet
    return (cfg.context_alphabet[int(rng.integers(len(cfg.context_alphabet)))],)


def _plant_motif(motif: MotifSpec, method: str, klass: str, contexts: Tuple[str, ...], role: str,
                 program: _Program) -> List[str]:
    ids = [f"{method}@bb{index}" for index in range(motif.size)]
    for block_id, labels in zip(ids, motif.labels):
        program.blocks.append(_Block(block_id, method, klass, contexts, role, labels, motif))
    program.edges.extend((ids[src], ids[dst]) for src, dst in motif.edges)
    return ids


def _layout(rng: np.random.Generator, cfg: GenConfig, malicious: bool) -> _Program:
    """Draw classes, methods and topology of one sample"""
    program = _Program()
    n_host = int(rng.integers(cfg.classes_per_app[0], cfg.classes_per_app[1] + 1))
    n_rider = int(rng.integers(cfg.malice_classes_per_app[0], cfg.malice_classes_per_app[1] + 1)) if malicious else 0
    width = len(str(n_host + n_rider))
    names = [f"C{index:0{width}d}" for index in rng.permutation(n_host + n_rider)]
    host_classes, rider_classes = names[:n_host], names[n_host:]

    host_methods: List[List[str]] = []
    for klass in host_classes:
        n_methods = int(rng.integers(cfg.methods_per_class[0], cfg.methods_per_class[1] + 1))
        for index in range(n_methods):
            method = f"{klass}.m{index}"
            host_methods.append(_method_blocks(rng, cfg, method, klass, _method_contexts(rng, cfg), "host", program))

    for caller in host_methods:
        for callee in host_methods:
            if caller is not callee and rng.random() < cfg.call_prob:
                program.edges.append((caller[int(rng.integers(len(caller)))], callee[0]))

    if cfg.decoy_prob > 0 and rng.random() < cfg.decoy_prob:
        motif = cfg.motifs[int(rng.integers(len(cfg.motifs)))]
        klass = host_classes[int(rng.integers(len(host_classes)))]
        benign = cfg.benign_contexts[int(rng.integers(len(cfg.benign_contexts)))]
        _plant_motif(motif, f"{klass}.decoy", klass, (benign,), "decoy", program)
        for position, labels in enumerate(motif.labels):
            klass = host_classes[int(rng.integers(len(host_classes)))]
            method = f"{klass}.scatter{position}"
            program.blocks.append(_Block(f"{method}@bb0", method, klass, (cfg.malice_context,), "decoy", labels,
                                         motif))

    for klass in sorted(rider_classes):
        motif = cfg.motifs[int(rng.integers(len(cfg.motifs)))]
        entry = _plant_motif(motif, f"{klass}.payload", klass, (cfg.malice_context,), "rider", program)[0]
        n_methods = int(rng.integers(cfg.methods_per_class[0], cfg.methods_per_class[1] + 1))
        for index in range(n_methods):
            blocks = _method_blocks(rng, cfg, f"{klass}.m{index}", klass, _method_contexts(rng, cfg), "rider", program)
            program.edges.append((blocks[-1], entry))
        program.planted[klass] = motif
        program.malice_groups.append(klass)
    return program


def _view_graph(rng: np.random.Generator, cfg: GenConfig, view: ViewSpec, program: _Program) -> ContextualGraph:
    alphabet = view.alphabet()
    keep = [block for block in program.blocks if not view.noise or block.role == "host"]
    kept_ids = {block.id for block in keep}
    nodes = []
    for block in keep:
        carries_motif = block.motif is not None and (block.motif.views is None or view.name in block.motif.views)
        if carries_motif and not view.noise:
            labels = block.motif_labels
        else:
            n_labels = 2 if rng.random() < cfg.multi_label_prob else 1
            labels = tuple(alphabet[index] for index in rng.choice(len(alphabet), size=min(n_labels, len(alphabet)),
                                                                   replace=False))
        nodes.append(NodeRecord(id=block.id, labels=tuple(sorted(set(labels))), contexts=frozenset(block.contexts),
                                method=block.method, klass=block.klass))
    edges = sorted({(src, dst) for src, dst in program.edges if src in kept_ids and dst in kept_ids})
    return ContextualGraph(tuple(nodes), tuple(edges))


def generate_sample(sample_id: str, malicious: bool, seed: np.random.SeedSequence, cfg: GenConfig) -> Sample:
    """Draw one sample from its own seed stream"""
    rng = np.random.default_rng(seed)
    program = _layout(rng, cfg, malicious)
    views = {view.name: _view_graph(rng, cfg, view, program) for view in cfg.views}
    malice_groups = frozenset(program.malice_groups) if malicious else None
    return Sample(id=sample_id, label=1 if malicious else -1, views=views, malice_groups=malice_groups)


def generate(cfg: GenConfig, n_jobs: int = 1) -> Dataset:
    """ Generate a labeled dataset
    Args:
        cfg: generator settings
        n_jobs: joblib workers; the output does not depend on it

    Returns:
        Dataset of n_benign + n_malicious samples in a seed-determined order
    """
    n_total = cfg.n_benign + cfg.n_malicious
    master = np.random.SeedSequence(int(cfg.seed))
    order_seed, *streams = master.spawn(n_total + 1)
    labels = np.array([False] * cfg.n_benign + [True] * cfg.n_malicious)
    labels = labels[np.random.default_rng(order_seed).permutation(n_total)] if n_total else labels
    width = max(4, len(str(n_total)))
    jobs = [(f"app{index:0{width}d}", bool(labels[index]), streams[index]) for index in range(n_total)]
    if n_jobs == 1 or n_total < 2:
        samples = [generate_sample(sample_id, malicious, stream, cfg) for sample_id, malicious, stream in jobs]
    else:
        samples = Parallel(n_jobs=n_jobs)(delayed(generate_sample)(sample_id, malicious, stream, cfg)
                                          for sample_id, malicious, stream in jobs)
    logger.info("Generated dataset", extra={"samples": n_total, "malicious": cfg.n_malicious, "seed": int(cfg.seed)})
    return Dataset(tuple(samples), tuple(sorted(view.name for view in cfg.views)))


def random_contextual_graph(rng: np.random.Generator, n_nodes: int, n_labels: int = 3,
                            edge_prob: Optional[float] = 0.3, n_edges: Optional[int] = None,
                            contexts: Sequence[str] = (Defaults.BENIGN_CONTEXT.value, Defaults.MALICE_CONTEXT.value),
                            multi_label_prob: float = 0.2, self_loop_prob: float = 0.1) -> ContextualGraph:
    """ Small random contextual graph
    Args:
        rng: numpy generator
        n_nodes: number of nodes
        n_labels: label alphabet size
        edge_prob: Erdős–Rényi edge probability, ignored when n_edges is given
        n_edges: exact number of non-loop edges
        contexts: context alphabet; every node draws a non-empty subset
        multi_label_prob: probability of a second label
        self_loop_prob: probability of a self loop per node

    Returns:
        ContextualGraph with node ids n0, n1, ...
    """
    seed = int(rng.integers(2 ** 31))
    if n_edges is not None:
        topology = nx.gnm_random_graph(n_nodes, n_edges, seed=seed, directed=True)
    else:
        topology = nx.gnp_random_graph(n_nodes, edge_prob, seed=seed, directed=True)
    width = len(str(max(n_nodes - 1, 0)))
    ids = [f"n{index:0{width}d}" for index in range(n_nodes)]
    nodes = []
    for node_id in ids:
        n_node_labels = 2 if n_labels > 1 and rng.random() < multi_label_prob else 1
        labels = sorted(f"L{index}" for index in rng.choice(n_labels, size=n_node_labels, replace=False))
        mask = rng.random(len(contexts)) < 0.5
        if not mask.any():
            mask[int(rng.integers(len(contexts)))] = True
        nodes.append(NodeRecord(id=node_id, labels=tuple(labels),
                                contexts=frozenset(context for context, used in zip(contexts, mask) if used)))
    edges = {(ids[src], ids[dst]) for src, dst in topology.edges()}
    edges.update((node_id, node_id) for node_id in ids if rng.random() < self_loop_prob)
    return ContextualGraph(tuple(nodes), tuple(sorted(edges)))
