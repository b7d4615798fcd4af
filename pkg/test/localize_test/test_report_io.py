"""Test report documents and CSV tables"""
from src.exceptions.learning_exception import ModelFormatError
from src.localize.mscore import MScoreReport
from src.localize.report_io import (load_report, load_reports, localization_frame, read_predictions_csv,
                                    report_path, save_report, write_localization_csv, write_predictions_csv)
from src.utility import write_json
import os
import pandas as pd
import tempfile
import unittest


class TestReportIO(unittest.TestCase):
    """Check the files written by localization"""

    def setUp(self) -> None:
        self.folder = tempfile.TemporaryDirectory()
        self.report = MScoreReport(
            sample_id="app/0001", prediction=1, raw_score=0.75,
            node_scores={"A.m@bb0": 0.5, "B.m@bb0": 0.25}, method_scores={"A.m": 0.5, "B.m": 0.25},
            class_scores={"A": 0.5, "B": 0.25}, per_view_node_scores={"api": {"A.m@bb0": 0.5, "B.m@bb0": 0.25}},
            ranked_classes=[("A", 0.5), ("B", 0.25)], per_view_ranked_classes={"api": [("A", 0.5), ("B", 0.25)]})

    def tearDown(self) -> None:
        self.folder.cleanup()

    def test_report_round_trip(self) -> None:
        path = report_path(self.folder.name, self.report.sample_id)
        self.assertEqual(os.path.basename(path), "app_0001.mscores.json")
        save_report(self.report, path)
        self.assertEqual(load_report(path), self.report)
        self.assertEqual(load_reports(self.folder.name), [self.report])

    def test_foreign_document_is_rejected(self) -> None:
        path = os.path.join(self.folder.name, "x.mscores.json")
        write_json({"format": "other"}, path)
        with self.assertRaises(ModelFormatError):
            load_report(path)

    def test_localization_table(self) -> None:
        frame = localization_frame([self.report], top_k=1)
        self.assertEqual(frame.to_dict("records"),
                         [{"sample_id": "app/0001", "class_group_id": "A", "rank": 1, "m_score": 0.5}])
        path = os.path.join(self.folder.name, "localization.csv")
        write_localization_csv([self.report], path, top_k=10)
        self.assertEqual(list(pd.read_csv(path)["rank"]), [1, 2])

    def test_predictions_table(self) -> None:
        path = os.path.join(self.folder.name, "predictions.csv")
        write_predictions_csv([("s1", 1, 0.5), ("s2", -1, -0.125)], path)
        with open(path, "r", encoding="utf-8") as handle:
            self.assertEqual(handle.readline().strip(), "sample_id,prediction,raw_score")
        self.assertEqual(read_predictions_csv(path), {"s1": 1, "s2": -1})

    def test_predictions_need_columns(self) -> None:
        path = os.path.join(self.folder.name, "bad.csv")
        pd.DataFrame({"sample_id": ["s1"]}).to_csv(path, index=False)
        with self.assertRaises(ModelFormatError):
            read_predictions_csv(path)


if __name__ == "__main__":
    unittest.main()
