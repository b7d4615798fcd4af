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


"""Line delimited dataset file format

Every line holds one sample record::

    {"id": str, "label": 1 | -1 | null,
     "views": {view: {"nodes": [{"id", "labels", "contexts", "method", "class"}], "edges": [[src, dst]]}},
     "malice_groups": [str] | null}
"""
import json
import logging

from typing import Any, Dict, List, Mapping

from src.exceptions.dataset_exception import DatasetError, DatasetFormatError, DatasetInvariantError
from src.graphmodel.graph import ContextualGraph, Dataset, NodeRecord, Sample
from src.utility import atomic_write, canonical_json

logger = logging.getLogger(__name__)


def _expect(condition: bool, message: str, line_no: int) -> None:
    if not condition:
        raise DatasetFormatError(message, line_no)


def _parse_node(raw: Any, line_no: int) -> NodeRecord:
    _expect(isinstance(raw, dict), "node must be an object", line_no)
    for key in ("id", "labels", "contexts"):
        _expect(key in raw, f"node is missing '{key}'", line_no)
    _expect(isinstance(raw["labels"], list), "node labels must be a list", line_no)
    _expect(isinstance(raw["contexts"], list), "node contexts must be a list", line_no)
    _expect(isinstance(raw["id"], str), "node id must be a string", line_no)
    _expect(all(isinstance(label, str) for label in raw["labels"]), "node labels must be strings", line_no)
    _expect(all(isinstance(context, str) for context in raw["contexts"]), "node contexts must be strings", line_no)
    for key in ("method", "class"):
        _expect(raw.get(key) is None or isinstance(raw.get(key), str), f"node '{key}' must be a string or null",
                line_no)
    contexts = raw["contexts"]
    if len(set(contexts)) != len(contexts):
        raise DatasetInvariantError(None, f"node {raw['id']!r} lists a context twice")
    return NodeRecord(id=raw["id"], labels=tuple(raw["labels"]), contexts=frozenset(contexts),
                      method=raw.get("method"), klass=raw.get("class"))


def _parse_graph(raw: Any, line_no: int) -> ContextualGraph:
    _expect(isinstance(raw, dict), "view must be an object", line_no)
    _expect(isinstance(raw.get("nodes"), list), "view is missing a 'nodes' list", line_no)
    _expect(isinstance(raw.get("edges"), list), "view is missing an 'edges' list", line_no)
    for edge in raw["edges"]:
        _expect(isinstance(edge, list) and len(edge) == 2 and all(isinstance(end, str) for end in edge),
                "edge must be a pair of node ids", line_no)
    nodes = tuple(_parse_node(node, line_no) for node in raw["nodes"])
    return ContextualGraph(nodes=nodes, edges=tuple((src, dst) for src, dst in raw["edges"]),
                           directed=raw.get("directed", True))


def record_to_sample(record: Mapping[str, Any], line_no: int = 0) -> Sample:
    """ Validate one decoded record and build the Sample
    Args:
        record: decoded json object
        line_no: 1-based line number for diagnostics

    Returns:
        Sample
    """
    _expect(isinstance(record, dict), "record must be an object", line_no)
    _expect(isinstance(record.get("id"), str), "record needs a string 'id'", line_no)
    _expect(isinstance(record.get("views"), dict), "record needs a 'views' object", line_no)
    sample_id = record["id"]
    label = record.get("label")
    _expect(label is None or (isinstance(label, int) and not isinstance(label, bool)),
            "label must be 1, -1 or null", line_no)
    malice = record.get("malice_groups")
    _expect(malice is None or (isinstance(malice, list) and all(isinstance(item, str) for item in malice)),
            "malice_groups must be a list of strings or null", line_no)

    views: Dict[str, ContextualGraph] = {}
    for view_name, raw_graph in record["views"].items():
        try:
            views[view_name] = _parse_graph(raw_graph, line_no)
        except DatasetInvariantError as error:
            raise DatasetInvariantError(sample_id, f"view {view_name!r}: {error.rule}") from error
    try:
        return Sample(id=sample_id, label=label, views=views,
                      malice_groups=frozenset(malice) if malice is not None else None)
    except DatasetInvariantError as error:
        raise DatasetInvariantError(sample_id, error.rule) from error


def sample_to_record(sample: Sample) -> Dict[str, Any]:
    """Canonical json-compatible record of a sample"""
    views = {}
    for view_name, graph in sample.views.items():
        views[view_name] = {
            "nodes": [{"id": node.id,
                       "labels": list(node.labels),
                       "contexts": node.sorted_contexts,
                       "method": node.method,
                       "class": node.klass} for node in graph.nodes],
            "edges": [[src, dst] for src, dst in graph.edges],
        }
    return {"id": sample.id,
            "label": sample.label,
            "views": views,
            "malice_groups": sorted(sample.malice_groups) if sample.malice_groups is not None else None}


def load_dataset(path: str) -> Dataset:
    """ Read and validate a dataset file
    Args:
        path: UTF-8 file with one record per line

    Returns:
        Dataset with samples in file order

    Raises:
        DatasetFormatError: unparsable line, with its line number
        DatasetInvariantError: violated graph or sample rule, naming the sample
        ViewMismatchError: samples with different view sets
    """
    samples: List[Sample] = []
    with open(path, "r", encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            text = line.strip()
            if not text:
                raise DatasetFormatError("empty record", line_no)
            try:
                record = json.loads(text)
            except json.JSONDecodeError as error:
                raise DatasetFormatError(f"invalid json ({error.msg})", line_no) from error
            samples.append(record_to_sample(record, line_no))
    dataset = Dataset(tuple(samples))
    logger.info("Loaded dataset", extra={"path": path, "samples": len(dataset),
                                         "views": list(dataset.view_names)})
    return dataset


def save_dataset(dataset: Dataset, path: str) -> None:
    """ Write a dataset with canonical key and list ordering

    Notes:
        * load_dataset(save_dataset(ds)) reproduces ds exactly and repeated saves are byte identical
    """
    try:
        with atomic_write(path) as handle:
            for sample in dataset.samples:
                handle.write(canonical_json(sample_to_record(sample)))
                handle.write("\n")
    except OSError as error:
        raise DatasetError(f"can not write dataset to {path}: {error}") from error
