"""Test dataset file reading and writing"""
from src.exceptions.dataset_exception import DatasetFormatError, DatasetInvariantError, ViewMismatchError
from src.graphmodel.dataset_io import load_dataset, record_to_sample, sample_to_record, save_dataset
from src.graphmodel.graph import ContextualGraph, Dataset, NodeRecord, Sample
import json
import os
import tempfile
import unittest


def _record(sample_id: str, label=1, views=("api",)) -> dict:
    graph = {"nodes": [{"id": "A.m@bb0", "labels": ["getLatitude"], "contexts": ["user-unaware"],
                        "method": "A.m", "class": "A"},
                       {"id": "A.m@bb1", "labels": ["writeBytes"], "contexts": ["user-aware"],
                        "method": "A.m", "class": "A"}],
             "edges": [["A.m@bb0", "A.m@bb1"]]}
    return {"id": sample_id, "label": label, "views": {view: graph for view in views},
            "malice_groups": ["A"] if label == 1 else None}


class TestDatasetIO(unittest.TestCase):
    """Check the line delimited dataset format"""

    def setUp(self) -> None:
        self.folder = tempfile.TemporaryDirectory()
        self.path = os.path.join(self.folder.name, "data.jsonl")

    def tearDown(self) -> None:
        self.folder.cleanup()

    def _write_lines(self, lines) -> None:
        with open(self.path, "w", encoding="utf-8") as handle:
            handle.write("\n".join(lines) + "\n")

    def test_load_builds_samples_in_file_order(self) -> None:
        self._write_lines([json.dumps(_record("s2")), json.dumps(_record("s1", label=-1))])
        dataset = load_dataset(self.path)
        self.assertEqual(dataset.ids, ["s2", "s1"])
        self.assertEqual(dataset.view_names, ("api",))
        self.assertEqual(list(dataset.labels()), [1, -1])
        graph = dataset.sample("s2").views["api"]
        self.assertEqual(graph.successors, ((1,), ()))
        self.assertEqual(dataset.sample("s2").malice_groups, frozenset({"A"}))

    def test_save_then_load_is_identity_and_byte_stable(self) -> None:
        self._write_lines([json.dumps(_record("s1")), json.dumps(_record("s2", label=-1))])
        dataset = load_dataset(self.path)
        copy_path = os.path.join(self.folder.name, "copy.jsonl")
        save_dataset(dataset, copy_path)
        self.assertEqual(load_dataset(copy_path), dataset)
        again_path = os.path.join(self.folder.name, "again.jsonl")
        save_dataset(load_dataset(copy_path), again_path)
        with open(copy_path, "rb") as first, open(again_path, "rb") as second:
            self.assertEqual(first.read(), second.read())

    def test_invalid_json_reports_line(self) -> None:
        self._write_lines([json.dumps(_record("s1")), "{not json"])
        with self.assertRaises(DatasetFormatError) as context:
            load_dataset(self.path)
        self.assertEqual(context.exception.line_no, 2)

    def test_blank_line_is_rejected(self) -> None:
        with open(self.path, "w", encoding="utf-8") as handle:
            handle.write(json.dumps(_record("s1")) + "\n\n")
        with self.assertRaises(DatasetFormatError):
            load_dataset(self.path)

    def test_edge_to_unknown_node_names_sample(self) -> None:
        record = _record("broken")
        record["views"]["api"]["edges"].append(["A.m@bb0", "ghost"])
        with self.assertRaises(DatasetInvariantError) as context:
            record_to_sample(record, 1)
        self.assertEqual(context.exception.sample_id, "broken")

    def test_undirected_view_is_rejected(self) -> None:
        record = _record("s1")
        record["views"]["api"]["directed"] = False
        with self.assertRaises(DatasetInvariantError):
            record_to_sample(record, 1)

    def test_bad_label_is_a_format_error(self) -> None:
        with self.assertRaises(DatasetFormatError):
            record_to_sample(_record("s1", label="yes"), 3)

    def test_non_string_node_fields_are_format_errors(self) -> None:
        for key, value in (("contexts", [["user-aware"]]), ("contexts", [3]), ("contexts", [{"c": 1}]),
                           ("labels", [["getLatitude"]]), ("labels", [None]), ("id", 7)):
            record = _record("s1")
            record["views"]["api"]["nodes"][0][key] = value
            self._write_lines([json.dumps(record)])
            with self.assertRaises(DatasetFormatError, msg=f"{key}={value!r}") as context:
                load_dataset(self.path)
            self.assertEqual(context.exception.line_no, 1)

    def test_views_must_match_across_samples(self) -> None:
        self._write_lines([json.dumps(_record("s1")), json.dumps(_record("s2", views=("api", "perm")))])
        with self.assertRaises(ViewMismatchError):
            load_dataset(self.path)

    def test_record_is_canonical(self) -> None:
        nodes = (NodeRecord("b", ("y",), frozenset({"c2", "c1"})), NodeRecord("a", ("x",), frozenset({"c1"})))
        sample = Sample("s", None, {"v": ContextualGraph(nodes, (("b", "a"), ("a", "b")))})
        record = sample_to_record(sample)
        self.assertEqual([node["id"] for node in record["views"]["v"]["nodes"]], ["a", "b"])
        self.assertEqual(record["views"]["v"]["nodes"][1]["contexts"], ["c1", "c2"])
        self.assertEqual(record["views"]["v"]["edges"], [["a", "b"], ["b", "a"]])
        self.assertEqual(record_to_sample(record), sample)

    def test_duplicate_sample_ids_are_rejected(self) -> None:
        sample = record_to_sample(_record("same"))
        with self.assertRaises(DatasetInvariantError):
            Dataset((sample, sample))


if __name__ == "__main__":
    unittest.main()
