"""Test vocabularies and their TSV files"""
from src.cwlk.config import CwlConfig
from src.cwlk.vocabulary import Vocabulary, build_vocabulary, load_vocabulary, save_vocabulary
from src.exceptions.kernel_exception import HeightMismatchError, KernelError
from src.graphmodel.graph import NodeRecord, make_graph
import os
import tempfile
import unittest


def _chain(prefix: str, context: str = "c"):
    nodes = [NodeRecord(f"{prefix}{index}", (f"{prefix}{index}",), frozenset({context})) for index in range(3)]
    return make_graph(nodes, [(f"{prefix}0", f"{prefix}1"), (f"{prefix}1", f"{prefix}2")])


class TestVocabulary(unittest.TestCase):
    """Check vocabulary construction and persistence"""

    def setUp(self) -> None:
        self.folder = tempfile.TemporaryDirectory()

    def tearDown(self) -> None:
        self.folder.cleanup()

    def test_empty_graph_list(self) -> None:
        self.assertEqual(len(build_vocabulary([], CwlConfig())), 0)

    def test_isolated_node_collapses_across_heights(self) -> None:
        graph = make_graph([NodeRecord("n", ("L",), frozenset({"c"}))], [])
        vocabulary = build_vocabulary([graph], CwlConfig(h=2))
        self.assertEqual(vocabulary.labels, ["c⊕L"])

    def test_disjoint_alphabets_add_up(self) -> None:
        cfg = CwlConfig(h=2)
        first, second = _chain("a"), _chain("b")
        union = build_vocabulary([first, second], cfg)
        self.assertEqual(len(union), len(build_vocabulary([first], cfg)) + len(build_vocabulary([second], cfg)))

    def test_indices_are_lexicographic(self) -> None:
        vocabulary = build_vocabulary([_chain("b"), _chain("a")], CwlConfig(h=1))
        self.assertEqual(vocabulary.labels, sorted(vocabulary.labels))
        for index, label in enumerate(vocabulary.labels):
            self.assertEqual(vocabulary.index(label), index)
            self.assertIn(label, vocabulary)
        self.assertIsNone(vocabulary.get("missing"))

    def test_height_zero_holds_unigrams_only(self) -> None:
        vocabulary = build_vocabulary([_chain("a")], CwlConfig(h=0))
        self.assertEqual(vocabulary.labels, ["c⊕a0", "c⊕a1", "c⊕a2"])

    def test_check_compatible(self) -> None:
        vocabulary = build_vocabulary([_chain("a")], CwlConfig(h=2))
        vocabulary.check_compatible(CwlConfig(h=2, normalize=False))
        with self.assertRaises(HeightMismatchError):
            vocabulary.check_compatible(CwlConfig(h=1))
        with self.assertRaises(KernelError):
            vocabulary.check_compatible(CwlConfig(h=2, use_contexts=False))

    def test_repeated_label_is_rejected(self) -> None:
        with self.assertRaises(KernelError):
            Vocabulary(["x", "x"])

    def test_tsv_round_trip(self) -> None:
        cfg = CwlConfig(h=2)
        vocabulary = build_vocabulary([_chain("a"), _chain("b")], cfg, view="api")
        path = os.path.join(self.folder.name, "api.vocab.tsv")
        save_vocabulary(vocabulary, path)
        with open(path, "r", encoding="utf-8") as handle:
            first = handle.readline().rstrip("\n").split("\t")
        self.assertEqual(first, ["0", vocabulary.label(0)])
        self.assertEqual(load_vocabulary(path, "api", cfg), vocabulary)

    def test_compressed_tsv_keeps_readable_text(self) -> None:
        cfg = CwlConfig(h=1, compress=True)
        vocabulary = build_vocabulary([_chain("a")], cfg, view="api")
        path = os.path.join(self.folder.name, "hashed.vocab.tsv")
        save_vocabulary(vocabulary, path)
        loaded = load_vocabulary(path, "api", cfg)
        self.assertEqual(loaded.labels, vocabulary.labels)
        self.assertEqual([loaded.readable(index) for index in range(len(loaded))],
                         [vocabulary.readable(index) for index in range(len(vocabulary))])
        self.assertIn("c⊕a0⊕a1", [loaded.readable(index) for index in range(len(loaded))])

    def test_empty_file_gives_empty_vocabulary(self) -> None:
        path = os.path.join(self.folder.name, "empty.vocab.tsv")
        save_vocabulary(Vocabulary([]), path)
        self.assertEqual(len(load_vocabulary(path)), 0)

    def test_dict_round_trip(self) -> None:
        vocabulary = build_vocabulary([_chain("a")], CwlConfig(h=1, compress=True), view="api")
        restored = Vocabulary.from_dict(vocabulary.to_dict())
        self.assertEqual(restored, vocabulary)
        self.assertEqual(restored.readable(0), vocabulary.readable(0))


if __name__ == "__main__":
    unittest.main()
