"""Test detection and localization metrics and the benchmark drivers"""
from src.cwlk.config import CwlConfig
from src.exceptions.evaluation_exception import MissingReportError
from src.graphmodel.graph import Dataset, NodeRecord, Sample, make_graph
from src.localize.mscore import MScoreReport, interpret_dataset
from src.mkl.mkl import MklConfig
from src.pipeline import train_model
from src.synth.evaluation import evaluate, localization_score, select_C, split_evaluation
from src.synth.generator import GenConfig, MotifSpec, ViewSpec, generate
import numpy as np
import unittest


def _sample(sample_id: str, label: int, n_classes: int, malice=()) -> Sample:
    nodes = [NodeRecord(f"C{index:02d}.m@bb0", ("L",), frozenset({"c"}), f"C{index:02d}.m", f"C{index:02d}")
             for index in range(n_classes)]
    return Sample(sample_id, label, {"v": make_graph(nodes, [])}, frozenset(malice) if label == 1 else None)


def _report(sample_id: str, prediction: int, ranking) -> MScoreReport:
    return MScoreReport(sample_id, prediction, 1. if prediction == 1 else -1.,
                        ranked_classes=[(group, float(len(ranking) - rank)) for rank, group in enumerate(ranking)])


class TestLocalizationMetrics(unittest.TestCase):
    """Check top-k arithmetic"""

    def test_both_malice_classes_in_top_ten(self) -> None:
        sample = _sample("s", 1, 70, malice=("C05", "C40"))
        ranking = ["(untagged)", "C05", "C40"] + [f"C{index:02d}" for index in range(70) if index not in (5, 40)]
        score = localization_score(_report("s", 1, ranking), sample, k=10)
        self.assertEqual((score.tp, score.fp, score.fn), (2, 8, 0))
        self.assertAlmostEqual(score.fpr, 8 / 68)
        self.assertEqual(score.fnr, 0.)
        self.assertEqual(score.recall_at_k, 1.)
        self.assertAlmostEqual(score.precision_at_k, 0.2)

    def test_missed_class(self) -> None:
        sample = _sample("s", 1, 20, malice=("C00", "C19"))
        ranking = [f"C{index:02d}" for index in range(20)]
        score = localization_score(_report("s", 1, ranking), sample, k=10)
        self.assertEqual((score.tp, score.fp, score.fn), (1, 9, 1))
        self.assertEqual(score.recall_at_k, 0.5)
        self.assertEqual(score.fnr, 0.5)

    def test_corpus_record(self) -> None:
        samples = (_sample("m1", 1, 12, malice=("C00",)), _sample("m2", 1, 12, malice=("C03",)),
                   _sample("b1", -1, 12), _sample("b2", -1, 12))
        dataset = Dataset(samples)
        predictions = {"m1": 1, "m2": -1, "b1": -1, "b2": 1}
        reports = [_report("m1", 1, [f"C{index:02d}" for index in range(12)])]
        record = evaluate(predictions, reports, dataset, k=10)
        self.assertEqual(record.n_samples, 4)
        self.assertEqual((record.n_localized, record.n_undetected), (1, 1))
        self.assertEqual(record.precision, 0.5)
        self.assertEqual(record.recall, 0.5)
        self.assertEqual(record.accuracy, 0.5)
        self.assertEqual(record.recall_at_k_mean, 1.)
        self.assertAlmostEqual(record.fpr_mean, 9 / 11)
        self.assertEqual(record.avg_classes, 12.)
        self.assertEqual(list(record.to_frame().columns)[:2], ["k", "n_samples"])

    def test_perfect_predictions(self) -> None:
        dataset = Dataset((_sample("m", 1, 3, malice=("C01",)), _sample("b", -1, 3)))
        record = evaluate({"m": 1, "b": -1}, [_report("m", 1, ["C01", "C00", "C02"])], dataset)
        self.assertEqual(record.f_measure, 1.)
        self.assertEqual(record.fnr_mean, 0.)

    def test_missing_inputs(self) -> None:
        dataset = Dataset((_sample("m", 1, 3, malice=("C01",)), _sample("b", -1, 3)))
        with self.assertRaises(MissingReportError):
            evaluate({"m": 1}, [], dataset)
        with self.assertRaises(MissingReportError):
            evaluate({"m": 1, "b": -1}, [], dataset)


class TestBenchmarks(unittest.TestCase):
    """Check the split benchmark, C selection and the scaled localization run"""

    def test_split_evaluation_rows(self) -> None:
        dataset = generate(GenConfig(seed=2, n_benign=12, n_malicious=12,
                                     views=(ViewSpec("signal"), ViewSpec("noise", noise=True)),
                                     classes_per_app=(3, 4)))
        table = split_evaluation(dataset, CwlConfig(h=1), MklConfig(C=10.), runs=2, test_size=0.25, k_select=None)
        self.assertEqual(list(table["method"]), ["view:noise", "view:signal", "uniform", "mkl"])
        self.assertTrue((table["runs"] == 2).all())
        self.assertTrue(((table["f_measure_mean"] >= 0.) & (table["f_measure_mean"] <= 1.)).all())

    def test_select_C(self) -> None:
        dataset = generate(GenConfig(seed=4, n_benign=10, n_malicious=10, classes_per_app=(3, 4)))
        best, table = select_C(dataset, CwlConfig(h=1), grid=(1., 10.), folds=2, k_select=None)
        self.assertIn(best, (1., 10.))
        self.assertEqual(list(table["C"]), [1., 10.])

    def test_learned_weights_against_uniform_over_twenty_trials(self) -> None:
        signal_wins, at_least_uniform = 0, 0
        for seed in range(20):
            dataset = generate(GenConfig(seed=seed, n_benign=25, n_malicious=25, classes_per_app=(3, 5),
                                         views=(ViewSpec("signal"), ViewSpec("noise", noise=True))))
            table = split_evaluation(dataset, CwlConfig(h=2), MklConfig(C=10.), runs=1, test_size=0.3, seed=seed,
                                     k_select=None).set_index("method")
            learned, uniform = table.loc["mkl"], table.loc["uniform"]
            self.assertEqual((uniform["beta:signal"], uniform["beta:noise"]), (0.5, 0.5))
            signal_wins += learned["beta:signal"] > learned["beta:noise"]
            at_least_uniform += learned["f_measure_mean"] >= uniform["f_measure_mean"] - 1e-12
        self.assertGreaterEqual(signal_wins, 19)
        self.assertGreaterEqual(at_least_uniform, 16)

    def test_localization_on_piggybacked_corpus(self) -> None:
        cfg = GenConfig(seed=2024, n_benign=150, n_malicious=150,
                        views=(ViewSpec("api", 30), ViewSpec("perm", 15)),
                        classes_per_app=(60, 80), malice_classes_per_app=(2, 3), decoy_prob=0.5,
                        motifs=(MotifSpec(),
                                MotifSpec("dropper", (("net.fetch",), ("file.write",), ("code.load",),
                                                      ("reflect.invoke",)), ((0, 1), (1, 2), (2, 3), (0, 3)))))
        dataset = generate(cfg)
        rng = np.random.default_rng(0)
        order = rng.permutation(len(dataset))
        train, test = dataset.subset(order[:200]), dataset.subset(order[200:])
        model = train_model(train, CwlConfig(h=2, compress=True), MklConfig(C=100.), k_select=5000)
        reports = interpret_dataset(test, model)
        record = evaluate({report.sample_id: report.prediction for report in reports}, reports, test, k=10)
        self.assertGreater(record.n_localized, 0)
        self.assertGreaterEqual(record.avg_classes, 60.)
        self.assertGreaterEqual(record.recall_at_k_mean, 0.9)
        self.assertLessEqual(record.fnr_mean, 0.1)


if __name__ == "__main__":
    unittest.main()
