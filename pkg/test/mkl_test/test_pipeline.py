"""Test featurization and training on datasets"""
from src.cwlk.config import CwlConfig
from src.exceptions.learning_exception import MissingViewError
from src.graphmodel.graph import Dataset, NodeRecord, Sample, make_graph
from src.localize.mscore import interpret_dataset
from src.mkl.mkl import MklConfig
from src.pipeline import MultiViewFeaturizer, fit_featurizer, train_model
from src.synth.generator import GenConfig, ViewSpec, generate, random_contextual_graph
import numpy as np
import unittest


def _context_pairs(n_pairs: int = 10) -> Dataset:
    """Pairs of samples that differ only by the context of one node"""
    rng = np.random.default_rng(8)
    samples = []
    for index in range(n_pairs):
        host = random_contextual_graph(rng, 6, n_labels=5)
        for label, context in ((1, "user-unaware"), (-1, "user-aware")):
            nodes = list(host.nodes) + [NodeRecord("leak", ("getLatitude",), frozenset({context})),
                                        NodeRecord("sink", ("writeBytes",), frozenset({"user-aware"}))]
            graph = make_graph(nodes, list(host.edges) + [("leak", "sink"), (host.nodes[0].id, "leak")])
            samples.append(Sample(f"p{index}{'m' if label == 1 else 'b'}", label, {"cfg": graph}))
    return Dataset(tuple(samples))


class TestPipeline(unittest.TestCase):
    """Check the featurizer and the trained model"""

    def setUp(self) -> None:
        self.dataset = generate(GenConfig(seed=6, n_benign=10, n_malicious=10, classes_per_app=(3, 4),
                                          views=(ViewSpec("api"), ViewSpec("perm", 6))))

    def test_context_alone_separates_pairs(self) -> None:
        dataset = _context_pairs()
        model = train_model(dataset, CwlConfig(h=1), MklConfig(C=100.), k_select=None)
        reports = interpret_dataset(dataset, model)
        self.assertEqual([report.prediction for report in reports], list(dataset.labels()))

    def test_training_features_are_unit_vectors(self) -> None:
        featurizer = fit_featurizer(self.dataset, CwlConfig(h=2), k_select=30)
        for view in featurizer.views:
            features = featurizer.training_features[view]
            self.assertEqual(features.dimension, 30)
            for vector, trace in zip(features.vectors, features.traces):
                self.assertAlmostEqual(vector.norm(), 1., places=12)
                trace.check_partition(vector)

    def test_transform_matches_training_features(self) -> None:
        featurizer = fit_featurizer(self.dataset, CwlConfig(h=2), k_select=30)
        transformed = featurizer.transform_dataset(self.dataset)
        for view in featurizer.views:
            self.assertEqual(transformed[view].vectors, featurizer.training_features[view].vectors)

    def test_no_selection_below_budget(self) -> None:
        featurizer = fit_featurizer(self.dataset, CwlConfig(h=0), k_select=100000)
        self.assertEqual(featurizer.masks, {"api": None, "perm": None})

    def test_model_carries_featurization_state(self) -> None:
        model = train_model(self.dataset, CwlConfig(h=1), MklConfig(C=10.), k_select=25)
        self.assertEqual(model.sample_ids, self.dataset.ids)
        self.assertEqual(sorted(model.vocabularies), ["api", "perm"])
        self.assertEqual({view: sizes[1] for view, sizes in model.vocabulary_sizes.items()}, {"api": 25, "perm": 25})
        featurizer = MultiViewFeaturizer.from_model(model)
        sample = self.dataset.samples[0]
        with self.assertRaises(MissingViewError):
            featurizer.transform(Sample(sample.id, sample.label, {"api": sample.views["api"]}))


if __name__ == "__main__":
    unittest.main()
