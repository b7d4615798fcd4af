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


"""Report documents and corpus level CSV tables"""
import logging
import os

from typing import Any, Dict, Iterable, List, Sequence, Tuple

import pandas as pd

from src.constant import Defaults, FileFormat
from src.exceptions.learning_exception import ModelFormatError
from src.localize.mscore import MScoreReport
from src.utility import atomic_write, read_json, write_json

logger = logging.getLogger(__name__)

PREDICTION_COLUMNS = ["sample_id", "prediction", "raw_score"]
LOCALIZATION_COLUMNS = ["sample_id", "class_group_id", "rank", "m_score"]


def report_to_dict(report: MScoreReport) -> Dict[str, Any]:
    return {
        "format": FileFormat.REPORT.value,
        "sample_id": report.sample_id,
        "prediction": report.prediction,
        "raw_score": report.raw_score,
        "node_scores": report.node_scores,
        "method_scores": report.method_scores,
        "class_scores": report.class_scores,
        "per_view_node_scores": report.per_view_node_scores,
        "ranked_classes": [[group, score] for group, score in report.ranked_classes],
        "per_view_ranked_classes": {view: [[group, score] for group, score in ranking]
                                    for view, ranking in report.per_view_ranked_classes.items()},
    }


def report_from_dict(document: Dict[str, Any]) -> MScoreReport:
    if not isinstance(document, dict) or document.get("format") != FileFormat.REPORT.value:
        raise ModelFormatError(f"expected format {FileFormat.REPORT.value!r}")
    try:
        return MScoreReport(
            sample_id=document["sample_id"], prediction=int(document["prediction"]),
            raw_score=float(document["raw_score"]), node_scores=dict(document["node_scores"]),
            method_scores=dict(document["method_scores"]), class_scores=dict(document["class_scores"]),
            per_view_node_scores={view: dict(scores) for view, scores in document["per_view_node_scores"].items()},
            ranked_classes=[(group, float(score)) for group, score in document["ranked_classes"]],
            per_view_ranked_classes={view: [(group, float(score)) for group, score in ranking]
                                     for view, ranking in document["per_view_ranked_classes"].items()})
    except (KeyError, TypeError, ValueError) as error:
        raise ModelFormatError(f"malformed report document: {error}") from error


def report_path(folder: str, sample_id: str) -> str:
    safe = "".join(char if char.isalnum() or char in "-_." else "_" for char in sample_id)
    return os.path.join(folder, f"{safe}.mscores.json")


def save_report(report: MScoreReport, path: str) -> None:
    write_json(report_to_dict(report), path, indent=True)


def load_report(path: str) -> MScoreReport:
    return report_from_dict(read_json(path))


def load_reports(folder: str) -> List[MScoreReport]:
    """Every report document of a folder, in file name order"""
    names = sorted(name for name in os.listdir(folder) if name.endswith(".mscores.json"))
    return [load_report(os.path.join(folder, name)) for name in names]


def localization_frame(reports: Iterable[MScoreReport], top_k: int = Defaults.TOP_K.value) -> pd.DataFrame:
    rows = []
    for report in reports:
        for rank, (group, score) in enumerate(report.top_classes(top_k), start=1):
            rows.append({"sample_id": report.sample_id, "class_group_id": group, "rank": rank, "m_score": score})
    return pd.DataFrame(rows, columns=LOCALIZATION_COLUMNS)


def write_localization_csv(reports: Iterable[MScoreReport], path: str, top_k: int = Defaults.TOP_K.value) -> None:
    """ One row per (sample, ranked class) for the top_k classes of every report """
    frame = localization_frame(reports, top_k)
    with atomic_write(path) as handle:
        frame.to_csv(handle, index=False, float_format="%.17g", lineterminator="\n")


def write_predictions_csv(predictions: Sequence[Tuple[str, int, float]], path: str) -> None:
    frame = pd.DataFrame(list(predictions), columns=PREDICTION_COLUMNS)
    with atomic_write(path) as handle:
        frame.to_csv(handle, index=False, float_format="%.17g", lineterminator="\n")


def read_predictions_csv(path: str) -> Dict[str, int]:
    """ sample id -> predicted sign
    Raises:
        ModelFormatError: raise if a column is missing
    """
    frame = pd.read_csv(path, dtype={"sample_id": str}, keep_default_na=False)
    missing = [column for column in PREDICTION_COLUMNS if column not in frame.columns]
    if missing:
        raise ModelFormatError(f"{path} lacks columns {missing}")
    return {row.sample_id: int(row.prediction) for row in frame.itertuples(index=False)}
