"""Test the command line end to end"""
from src.cli.main import EXIT_CONVERGENCE, EXIT_DATA, EXIT_OK, EXIT_USAGE, main
from src.graphmodel.dataset_io import save_dataset
from src.graphmodel.graph import Dataset, NodeRecord, Sample, make_graph
from src.utility import read_json
import json
import numpy as np
import os
import pandas as pd
import tempfile
import unittest

GEN_CONFIG = """seed: 12
n_benign: 10
n_malicious: 10
classes_per_app: [3, 4]
views:
  - {name: api, alphabet_size: 10}
  - {name: perm, alphabet_size: 5}
"""


class TestCommandLine(unittest.TestCase):
    """Check sub-commands, artifacts and exit codes"""

    def setUp(self) -> None:
        self.folder = tempfile.TemporaryDirectory()
        self.config = self._path("gen.yaml")
        with open(self.config, "w", encoding="utf-8") as handle:
            handle.write(GEN_CONFIG)

    def tearDown(self) -> None:
        self.folder.cleanup()

    def _path(self, name: str) -> str:
        return os.path.join(self.folder.name, name)

    def _bytes(self, name: str) -> bytes:
        with open(self._path(name), "rb") as handle:
            return handle.read()

    def test_full_run(self) -> None:
        data, model = self._path("data.jsonl"), self._path("model.json")
        self.assertEqual(main(["gen", self.config, data]), EXIT_OK)
        self.assertEqual(read_json(data + ".manifest.json")["command"], "gen")
        self.assertEqual(main(["train", data, model, "--C", "10", "--k-select", "50", "--h", "1",
                               "--vocab-dir", self._path("vocab")]), EXIT_OK)
        training = read_json(model + ".training.json")
        self.assertEqual(sorted(training["betas"]), ["api", "perm"])
        self.assertTrue(os.path.exists(self._path("vocab/api.vocab.tsv")))
        manifest = read_json(model + ".manifest.json")
        self.assertEqual(manifest["config"]["cwl"]["h"], 1)
        self.assertEqual(manifest["config"]["mkl"]["C"], 10.)
        self.assertEqual(manifest["config"]["k_select"], 50)

        predictions = self._path("predictions.csv")
        self.assertEqual(main(["predict", model, data, predictions]), EXIT_OK)
        frame = pd.read_csv(predictions, dtype={"sample_id": str})
        self.assertEqual(list(frame.columns), ["sample_id", "prediction", "raw_score"])
        self.assertEqual(len(frame), 20)

        reports = self._path("reports")
        self.assertEqual(main(["localize", model, data, reports, "--top-k", "3"]), EXIT_OK)
        table = pd.read_csv(os.path.join(reports, "localization.csv"))
        self.assertTrue((table["rank"] <= 3).all())
        detected = set(frame.loc[frame["prediction"] == 1, "sample_id"])
        self.assertEqual(set(table["sample_id"]), detected)

        metrics = self._path("metrics.json")
        self.assertEqual(main(["eval", predictions, reports, data, metrics, "--csv", self._path("metrics.csv")]),
                         EXIT_OK)
        record = read_json(metrics)
        self.assertEqual(record["n_samples"], 20)
        self.assertEqual(record["k"], 10)

    def test_uniform_weights_are_recorded(self) -> None:
        data, model = self._path("data.jsonl"), self._path("model.json")
        main(["gen", self.config, data])
        self.assertEqual(main(["train", data, model, "--uniform", "--h", "1"]), EXIT_OK)
        self.assertEqual(read_json(model + ".training.json")["betas"], {"api": 0.5, "perm": 0.5})

    def test_runs_are_byte_identical(self) -> None:
        for run in ("a", "b"):
            self.assertEqual(main(["gen", self.config, self._path(f"{run}.jsonl")]), EXIT_OK)
            self.assertEqual(main(["train", self._path(f"{run}.jsonl"), self._path(f"{run}.model.json"),
                                   "--h", "1", "--vocab-dir", self._path(f"{run}-vocab")]), EXIT_OK)
        self.assertEqual(self._bytes("a.jsonl"), self._bytes("b.jsonl"))
        self.assertEqual(self._bytes("a.model.json"), self._bytes("b.model.json"))
        self.assertEqual(self._bytes("a-vocab/api.vocab.tsv"), self._bytes("b-vocab/api.vocab.tsv"))

    def test_bench_table(self) -> None:
        data, out = self._path("data.jsonl"), self._path("bench.csv")
        main(["gen", self.config, data])
        self.assertEqual(main(["bench", data, out, "--runs", "1", "--h", "1", "--C", "10"]), EXIT_OK)
        table = pd.read_csv(out)
        self.assertEqual(list(table["method"]), ["view:api", "view:perm", "uniform", "mkl"])
        self.assertTrue((table["runs"] == 1).all())
        self.assertEqual(read_json(out + ".manifest.json")["config"]["runs"], 1)

    def test_kernel_of_identical_graphs_is_all_ones(self) -> None:
        graph = make_graph([NodeRecord("a", ("x",), frozenset({"c"})), NodeRecord("b", ("y",), frozenset({"c"}))],
                           [("a", "b")])
        data = self._path("same.jsonl")
        save_dataset(Dataset(tuple(Sample(f"s{index}", None, {"api": graph}) for index in range(3))), data)
        out = self._path("kernel.csv")
        self.assertEqual(main(["kernel", data, out, "--view", "api", "--embeddings", self._path("emb.txt")]),
                         EXIT_OK)
        frame = pd.read_csv(out, index_col="sample_id")
        self.assertEqual(list(frame.index), ["s0", "s1", "s2"])
        np.testing.assert_allclose(frame.to_numpy(), np.ones((3, 3)), rtol=0., atol=1e-12)
        self.assertEqual(main(["kernel", data, out, "--view", "missing"]), EXIT_DATA)

    def test_usage_errors(self) -> None:
        self.assertEqual(main([]), EXIT_USAGE)
        self.assertEqual(main(["train"]), EXIT_USAGE)
        self.assertEqual(main(["gen", self.config, self._path("x.jsonl"), "--bogus"]), EXIT_USAGE)

    def test_bad_generator_config_writes_nothing(self) -> None:
        bad = self._path("bad.yaml")
        with open(bad, "w", encoding="utf-8") as handle:
            handle.write("seed: seven\n")
        out = self._path("never.jsonl")
        self.assertEqual(main(["gen", bad, out]), EXIT_USAGE)
        self.assertFalse(os.path.exists(out))

    def test_data_errors(self) -> None:
        self.assertEqual(main(["train", self._path("absent.jsonl"), self._path("model.json")]), EXIT_DATA)
        broken = self._path("broken.jsonl")
        with open(broken, "w", encoding="utf-8") as handle:
            handle.write(json.dumps({"id": "s", "label": 1, "views": {}}) + "\n")
        self.assertEqual(main(["kernel", broken, self._path("k.csv"), "--view", "api"]), EXIT_DATA)

    def test_training_config_errors(self) -> None:
        data = self._path("data.jsonl")
        main(["gen", self.config, data])
        config = self._path("train.yaml")
        with open(config, "w", encoding="utf-8") as handle:
            handle.write("mkl: {C: -1}\n")
        self.assertEqual(main(["train", data, self._path("m.json"), "--config", config]), EXIT_USAGE)
        with open(config, "w", encoding="utf-8") as handle:
            handle.write("epochs: 3\n")
        self.assertEqual(main(["train", data, self._path("m.json"), "--config", config]), EXIT_USAGE)

    def test_config_value_types_exit_one(self) -> None:
        data = self._path("data.jsonl")
        main(["gen", self.config, data])
        config = self._path("train.yaml")
        for text in ("mkl: {C: fast}\n", "mkl: {p: [2]}\n", "mkl: {max_outer_iters: many}\n",
                     "mkl: {svm: {tol: small}}\n", "mkl: {svm: [1]}\n", "mkl: 3\n", "cwl: [1]\n",
                     "cwl: {h: two}\n", "uniform: sometimes\n"):
            with open(config, "w", encoding="utf-8") as handle:
                handle.write(text)
            self.assertEqual(main(["train", data, self._path("m.json"), "--config", config]), EXIT_USAGE, msg=text)
        self.assertFalse(os.path.exists(self._path("m.json")))

    def test_generator_value_types_exit_one(self) -> None:
        bad = self._path("bad.yaml")
        for text in ("motifs:\n  - {name: leak, labels: 5}\n", "motifs:\n  - {name: leak, edges: [[0, one]]}\n",
                     "motifs: [leak]\n", "views: [api]\n", "views:\n  - {name: api, noise: maybe}\n",
                     "context_alphabet: [1, 2]\n", "host_nodes: [2, five]\n"):
            with open(bad, "w", encoding="utf-8") as handle:
                handle.write(text)
            self.assertEqual(main(["gen", bad, self._path("never.jsonl")]), EXIT_USAGE, msg=text)
        self.assertFalse(os.path.exists(self._path("never.jsonl")))

    def test_failed_run_leaves_a_manifest(self) -> None:
        model = self._path("model.json")
        self.assertEqual(main(["train", self._path("absent.jsonl"), model]), EXIT_DATA)
        self.assertFalse(os.path.exists(model))
        manifest = read_json(model + ".manifest.json")
        self.assertEqual(manifest["command"], "train")
        self.assertEqual(manifest["status"], "failed")
        self.assertEqual(manifest["exit_code"], EXIT_DATA)
        self.assertEqual(manifest["error"]["kind"], "FileNotFoundError")
        self.assertEqual(manifest["inputs"], {"dataset": self._path("absent.jsonl")})

        data = self._path("data.jsonl")
        self.assertEqual(main(["gen", self.config, data]), EXIT_OK)
        manifest = read_json(data + ".manifest.json")
        self.assertEqual((manifest["status"], manifest["exit_code"], manifest["error"]), ("ok", 0, None))

    def test_sink_labels_repeat_unless_heights_are_separated(self) -> None:
        graph = make_graph([NodeRecord("a", ("x",), frozenset({"c"})), NodeRecord("b", ("y",), frozenset({"c"}))],
                           [("a", "b")])
        data = self._path("edge.jsonl")
        save_dataset(Dataset((Sample("s0", None, {"api": graph}),)), data)
        out = self._path("kernel.csv")
        self.assertEqual(main(["kernel", data, out, "--view", "api", "--h", "1", "--no-normalize"]), EXIT_OK)
        self.assertEqual(pd.read_csv(out, index_col="sample_id").loc["s0", "s0"], 6.)
        self.assertEqual(main(["kernel", data, out, "--view", "api", "--h", "1", "--no-normalize",
                               "--separate-heights"]), EXIT_OK)
        self.assertEqual(pd.read_csv(out, index_col="sample_id").loc["s0", "s0"], 4.)

    def test_unconverged_solver_exits_three(self) -> None:
        data, model = self._path("data.jsonl"), self._path("model.json")
        main(["gen", self.config, data])
        config = self._path("train.yaml")
        with open(config, "w", encoding="utf-8") as handle:
            handle.write("mkl:\n  C: 1000.0\n  svm: {tol: 1.0e-12, max_passes: 1}\n")
        self.assertEqual(main(["train", data, model, "--config", config, "--h", "1"]), EXIT_CONVERGENCE)
        self.assertFalse(os.path.exists(model))

    def test_json_log_file(self) -> None:
        data, log_file = self._path("data.jsonl"), self._path("run.log")
        self.assertEqual(main(["--log-level", "INFO", "--log-file", log_file, "gen", self.config, data]), EXIT_OK)
        with open(log_file, "r", encoding="utf-8") as handle:
            records = [json.loads(line) for line in handle if line.strip()]
        self.assertIn("Generated dataset", [record["message"] for record in records])

    def test_log_folder(self) -> None:
        folder = self._path("logs")
        self.assertEqual(main(["--log-folder", folder, "gen", self.config, self._path("x.jsonl")]), EXIT_USAGE)
        os.makedirs(folder)
        self.assertEqual(main(["--log-folder", folder, "gen", self.config, self._path("x.jsonl")]), EXIT_OK)
        names = os.listdir(folder)
        self.assertEqual(len(names), 1)
        self.assertTrue(names[0].startswith("logfile_"))
        self.assertEqual(main(["--log-level", "LOUD", "gen", self.config, self._path("x.jsonl")]), EXIT_USAGE)


if __name__ == "__main__":
    unittest.main()
