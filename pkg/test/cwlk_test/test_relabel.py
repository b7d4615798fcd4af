"""Test contextual relabeling"""
from src.cwlk.config import CwlConfig
from src.cwlk.relabel import LabelCodec, contextual_relabel, escape_label, node_label
from src.cwlk.vocabulary import build_vocabulary
from src.exceptions.learning_exception import InvalidConfigError
from src.graphmodel.graph import NodeRecord, make_graph
from src.synth.generator import random_contextual_graph
import numpy as np
import unittest


def _node(node_id: str, labels=None, contexts=("u",)) -> NodeRecord:
    return NodeRecord(node_id, tuple(labels or (node_id,)), frozenset(contexts))


class TestContextualRelabel(unittest.TestCase):
    """Check neighbourhood label strings"""

    def test_context_prefixes_every_height(self) -> None:
        graph = make_graph([_node("getLatitude", contexts=("user-unaware",)),
                            _node("writeBytes", contexts=("user-aware",))],
                           [("getLatitude", "writeBytes")])
        sequence = contextual_relabel(graph, 1)
        self.assertEqual(sequence[0]["getLatitude"], ["user-unaware⊕getLatitude"])
        self.assertEqual(sequence[1]["getLatitude"], ["user-unaware⊕getLatitude⊕writeBytes"])
        self.assertEqual(sequence[1]["writeBytes"], ["user-aware⊕writeBytes"])

    def test_isolated_node_keeps_its_label(self) -> None:
        graph = make_graph([_node("L", contexts=("c",))], [])
        sequence = contextual_relabel(graph, 3)
        self.assertEqual(len(sequence), 4)
        for per_node in sequence:
            self.assertEqual(per_node["L"], ["c⊕L"])

    def test_directed_triangle(self) -> None:
        nodes = [_node("A"), _node("B"), _node("C")]
        triangle = make_graph(nodes, [("A", "B"), ("B", "C"), ("C", "A")])
        self.assertEqual(contextual_relabel(triangle, 1)[1]["A"], ["u⊕A⊕B"])
        both_ways = make_graph(nodes, [("A", "B"), ("B", "C"), ("C", "A"), ("B", "A"), ("C", "B"), ("A", "C")])
        self.assertEqual(contextual_relabel(both_ways, 1)[1]["A"], ["u⊕A⊕B,C"])

    def test_one_label_per_context(self) -> None:
        graph = make_graph([_node("x", contexts=("user-unaware", "user-aware"))], [])
        self.assertEqual(contextual_relabel(graph, 0)[0]["x"], ["user-aware⊕x", "user-unaware⊕x"])
        self.assertEqual(contextual_relabel(graph, 0, use_contexts=False)[0]["x"], ["*⊕x"])

    def test_composite_neighbours_are_wrapped(self) -> None:
        graph = make_graph([_node("a"), _node("b", labels=("p", "q")), _node("c")],
                           [("a", "b"), ("b", "c"), ("a", "c")])
        sequence = contextual_relabel(graph, 2)
        self.assertEqual(sequence[1]["a"], ["u⊕a⊕(p,q),c"])
        self.assertEqual(sequence[2]["a"], ["u⊕a⊕(p,q),c⊕(p,q⊕c),c"])

    def test_separate_heights_prefix(self) -> None:
        graph = make_graph([_node("a"), _node("b")], [("a", "b")])
        sequence = contextual_relabel(graph, 1, separate_heights=True)
        self.assertEqual(sequence[0]["a"], ["0:u⊕a"])
        self.assertEqual(sequence[1]["a"], ["1:u⊕a⊕b"])

    def test_reserved_characters_are_escaped(self) -> None:
        self.assertEqual(escape_label("a,b"), "a\\,b")
        self.assertEqual(escape_label("f(x)⊕y\\"), "f\\(x\\)\\⊕y\\\\")
        self.assertEqual(node_label(NodeRecord("n", ("a,b", "c"), frozenset({"u"}))), "a\\,b,c")
        split = make_graph([_node("n", labels=("a", "b"))], [])
        joined = make_graph([_node("n", labels=("a,b",))], [])
        self.assertNotEqual(contextual_relabel(split, 0)[0]["n"], contextual_relabel(joined, 0)[0]["n"])

    def test_compressed_labels_are_hashes(self) -> None:
        graph = make_graph([_node("a"), _node("b")], [("a", "b")])
        codec = LabelCodec()
        sequence = contextual_relabel(graph, 2, compress=True, codec=codec)
        for per_node in sequence:
            for labels in per_node.values():
                for label in labels:
                    self.assertEqual(len(label), 16)
                    int(label, 16)
        self.assertEqual(codec.readable(sequence[1]["a"][0]), "u⊕a⊕b")

    def test_compressed_vocabulary_reads_like_uncompressed(self) -> None:
        rng = np.random.default_rng(5)
        graphs = [random_contextual_graph(rng, int(rng.integers(1, 9)), n_labels=3) for _ in range(30)]
        for separate_heights in (False, True):
            plain = build_vocabulary(graphs, CwlConfig(h=3, separate_heights=separate_heights))
            hashed = build_vocabulary(graphs, CwlConfig(h=3, compress=True, separate_heights=separate_heights))
            self.assertEqual(len(plain), len(hashed))
            self.assertEqual(sorted(hashed.readable(index) for index in range(len(hashed))), plain.labels)

    def test_config_validation(self) -> None:
        with self.assertRaises(InvalidConfigError):
            CwlConfig(h=-1)
        with self.assertRaises(InvalidConfigError):
            CwlConfig.from_dict({"h": 2, "depth": 3})
        self.assertEqual(CwlConfig.from_dict({"h": 1}).h, 1)


if __name__ == "__main__":
    unittest.main()
