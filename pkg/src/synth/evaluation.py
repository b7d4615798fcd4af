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


"""Detection and localization metrics, repeated split benchmarks and C selection"""
import dataclasses
import logging
import time

from dataclasses import dataclass
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from sklearn.metrics import accuracy_score, precision_recall_fscore_support
from sklearn.model_selection import StratifiedKFold, train_test_split

from src.constant import Defaults
from src.cwlk.config import CwlConfig
from src.cwlk.kernel import kernel_matrix
from src.exceptions.evaluation_exception import MissingReportError
from src.graphmodel.graph import Dataset, Sample
from src.localize.mscore import MScoreReport
from src.mkl.mkl import MklConfig, alternate, assemble_model, composite_embed, decision_value
from src.pipeline import ViewFeatures, fit_featurizer

logger = logging.getLogger(__name__)


@dataclass
class LocalizationScore:
    """ Top-k localization outcome of one malicious sample

    Here is a list of available attributes of "LocalizationScore" class:
        * sample_id: sample id
        * n_classes, n_malice: class groups of the sample and how many of them are ground truth malice
        * tp, fp, fn: malice classes inside the top k, other classes inside the top k, malice classes missed
        * fpr, fnr, precision_at_k, recall_at_k: per-sample rates
    """
    sample_id: str
    n_classes: int
    n_malice: int
    tp: int
    fp: int
    fn: int
    fpr: float
    fnr: float
    precision_at_k: float
    recall_at_k: float


def localization_score(report: MScoreReport, sample: Sample, k: int = Defaults.TOP_K.value) -> LocalizationScore:
    """ Compare the top-k class ranking of a report with the sample's ground truth

    Notes:
        * Groups that are not classes of the sample, such as "(untagged)", are skipped in the ranking
    """
    classes = set(sample.class_ids())
    malice = set(sample.malice_groups or ())
    ranked = [group for group, _ in report.ranked_classes if group in classes][:k]
    tp = len(set(ranked) & malice)
    fp = len(ranked) - tp
    fn = len(malice) - tp
    non_malice = len(classes - malice)
    return LocalizationScore(
        sample_id=sample.id, n_classes=len(classes), n_malice=len(malice), tp=tp, fp=fp, fn=fn,
        fpr=fp / non_malice if non_malice else 0.,
        fnr=fn / len(malice) if malice else 0.,
        precision_at_k=tp / min(k, len(ranked)) if ranked else 0.,
        recall_at_k=tp / len(malice) if malice else 0.)


@dataclass
class EvaluationRecord:
    """ Corpus level metrics

    Notes:
        * Localization averages cover ground truth malicious samples predicted malicious; the others are
          counted in n_undetected
    """
    k: int
    n_samples: int
    precision: float
    recall: float
    f_measure: float
    accuracy: float
    n_localized: int
    n_undetected: int
    avg_classes: float
    avg_malice_classes: float
    fpr_mean: float
    fpr_std: float
    fnr_mean: float
    fnr_std: float
    precision_at_k_mean: float
    precision_at_k_std: float
    recall_at_k_mean: float
    recall_at_k_std: float

    def to_dict(self) -> Dict[str, Any]:
        return dataclasses.asdict(self)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([self.to_dict()])


def _mean_std(values: Sequence[float]) -> Tuple[float, float]:
    if not values:
        return 0., 0.
    return float(np.mean(values)), float(np.std(values))


def detection_scores(y_true: Sequence[int], y_pred: Sequence[int]) -> Tuple[float, float, float, float]:
    """Precision, recall, F-measure of the malicious class and accuracy"""
    if not len(y_true):
        return 0., 0., 0., 0.
    precision, recall, f_measure, _ = precision_recall_fscore_support(y_true, y_pred, pos_label=1, average="binary",
                                                                      zero_division=0)
    return float(precision), float(recall), float(f_measure), float(accuracy_score(y_true, y_pred))


def evaluate(predictions: Mapping[str, int], reports: Iterable[MScoreReport], dataset: Dataset,
             k: int = Defaults.TOP_K.value) -> EvaluationRecord:
    """ Detection and top-k localization metrics
    Args:
        predictions: sample id -> predicted sign, for every labeled sample
        reports: m-score reports, at least one for every malicious sample predicted malicious
        dataset: ground truth labels and malice groups
        k: ranking horizon

    Returns:
        EvaluationRecord

    Raises:
        MissingReportError: raise if a prediction or a required report is missing
    """
    by_id = {report.sample_id: report for report in reports}
    y_true, y_pred = [], []
    scores: List[LocalizationScore] = []
    undetected = 0
    for sample in dataset:
        if sample.label is None:
            continue
        if sample.id not in predictions:
            raise MissingReportError(f"no prediction for sample {sample.id!r}")
        predicted = int(predictions[sample.id])
        y_true.append(sample.label)
        y_pred.append(predicted)
        if sample.label != 1 or not sample.malice_groups:
            continue
        if predicted != 1:
            undetected += 1
            continue
        if sample.id not in by_id:
            raise MissingReportError(f"no m-score report for detected malicious sample {sample.id!r}")
        scores.append(localization_score(by_id[sample.id], sample, k))

    precision, recall, f_measure, accuracy = detection_scores(y_true, y_pred)
    fpr = _mean_std([item.fpr for item in scores])
    fnr = _mean_std([item.fnr for item in scores])
    p_at_k = _mean_std([item.precision_at_k for item in scores])
    r_at_k = _mean_std([item.recall_at_k for item in scores])
    record = EvaluationRecord(
        k=k, n_samples=len(y_true), precision=precision, recall=recall, f_measure=f_measure, accuracy=accuracy,
        n_localized=len(scores), n_undetected=undetected,
        avg_classes=_mean_std([item.n_classes for item in scores])[0],
        avg_malice_classes=_mean_std([item.n_malice for item in scores])[0],
        fpr_mean=fpr[0], fpr_std=fpr[1], fnr_mean=fnr[0], fnr_std=fnr[1],
        precision_at_k_mean=p_at_k[0], precision_at_k_std=p_at_k[1],
        recall_at_k_mean=r_at_k[0], recall_at_k_std=r_at_k[1])
    logger.info("Evaluated", extra={"f_measure": f_measure, "recall_at_k": r_at_k[0], "fnr": fnr[0]})
    return record


def _view_kernels(features: Mapping[str, ViewFeatures], n_jobs: int) -> Dict[str, np.ndarray]:
    return {view: kernel_matrix(item.vectors, n_jobs=n_jobs) for view, item in features.items()}


def _fit_and_score(train_features: Mapping[str, ViewFeatures], kernels: Mapping[str, np.ndarray],
                   y_train: np.ndarray, test_features: Mapping[str, ViewFeatures], y_test: np.ndarray,
                   views: Sequence[str], cfg: MklConfig, uniform: bool) -> Tuple[np.ndarray, float, float, Dict]:
    """Train on the given views and return test predictions, train and predict seconds, weights"""
    start = time.perf_counter()
    betas, solution, _, _ = alternate({view: kernels[view] for view in views}, y_train, cfg, uniform=uniform)
    model = assemble_model({view: train_features[view].vectors for view in views}, y_train, betas, solution, cfg,
                           uniform=uniform)
    trained = time.perf_counter()
    raw = [decision_value(model, composite_embed({view: test_features[view].vectors[index] for view in views},
                                                 model)) for index in range(y_test.size)]
    predicted = time.perf_counter()
    return np.where(np.asarray(raw) > 0., 1, -1), trained - start, predicted - trained, betas


def split_evaluation(dataset: Dataset, cwl_cfg: CwlConfig = CwlConfig(), mkl_cfg: MklConfig = MklConfig(),
                     runs: int = 5, test_size: float = 0.3, seed: int = 0,
                     k_select: Optional[int] = Defaults.K_SELECT.value, n_jobs: int = 1) -> pd.DataFrame:
    """ Compare single views, the uniform combination and learned weights over repeated stratified splits
    Args:
        dataset: labeled samples
        cwl_cfg: relabeling options
        mkl_cfg: combination hyperparameters
        runs: number of random splits
        test_size: held out fraction
        seed: split seed of the first run, incremented per run
        k_select: chi-squared budget per view
        n_jobs: joblib workers

    Returns:
        one row per method with mean and std of precision, recall and F-measure, mean timings and mean
        view weights (0 for views a method does not use)
    """
    labels = dataset.labels()
    rows = []
    for run in range(runs):
        train_index, test_index = train_test_split(np.arange(len(dataset)), test_size=test_size, stratify=labels,
                                                   random_state=seed + run)
        train, test = dataset.subset(train_index), dataset.subset(test_index)
        y_train, y_test = labels[train_index], labels[test_index]
        start = time.perf_counter()
        featurizer = fit_featurizer(train, cwl_cfg, k_select, n_jobs)
        featurize_train = time.perf_counter() - start
        start = time.perf_counter()
        test_features = featurizer.transform_dataset(test)
        featurize_test = time.perf_counter() - start
        train_features = featurizer.training_features
        kernels = _view_kernels(train_features, n_jobs)

        methods = [(f"view:{view}", [view], True) for view in featurizer.views]
        methods += [("uniform", featurizer.views, True), ("mkl", featurizer.views, False)]
        for name, views, uniform in methods:
            predicted, train_seconds, predict_seconds, betas = _fit_and_score(
                train_features, kernels, y_train, test_features, y_test, views, mkl_cfg, uniform)
            precision, recall, f_measure, _ = detection_scores(y_test, predicted)
            rows.append({"run": run, "method": name, "precision": precision, "recall": recall,
                         "f_measure": f_measure, "train_seconds": featurize_train + train_seconds,
                         "predict_seconds_per_sample": (featurize_test + predict_seconds) / max(len(test), 1),
                         **{f"beta:{view}": beta for view, beta in betas.items()}})
        logger.info("Finished split", extra={"run": run, "train": len(train), "test": len(test)})

    frame = pd.DataFrame(rows)
    metrics = ["precision", "recall", "f_measure"]
    summary = frame.groupby("method", sort=False)[metrics].agg(["mean", "std"])
    summary.columns = [f"{metric}_{statistic}" for metric, statistic in summary.columns]
    timings = frame.groupby("method", sort=False)[["train_seconds", "predict_seconds_per_sample"]].mean()
    betas = frame.groupby("method", sort=False)[sorted(column for column in frame if column.startswith("beta:"))].mean()
    summary = summary.join(timings).join(betas).fillna(0.).reset_index()
    summary.insert(1, "runs", runs)
    return summary


def select_C(dataset: Dataset, cwl_cfg: CwlConfig = CwlConfig(), mkl_cfg: MklConfig = MklConfig(),
             grid: Sequence[float] = (0.1, 1., 10., 100.), folds: int = 5, seed: int = 0, uniform: bool = False,
             k_select: Optional[int] = Defaults.K_SELECT.value, n_jobs: int = 1) -> Tuple[float, pd.DataFrame]:
    """ Pick C by stratified k-fold cross-validated F-measure
    Returns:
        best C (smallest on ties) and a table of mean / std F-measure per C
    """
    labels = dataset.labels()
    splitter = StratifiedKFold(n_splits=folds, shuffle=True, random_state=seed)
    rows = []
    for fold, (train_index, valid_index) in enumerate(splitter.split(np.zeros(len(dataset)), labels)):
        train, valid = dataset.subset(train_index), dataset.subset(valid_index)
        featurizer = fit_featurizer(train, cwl_cfg, k_select, n_jobs)
        valid_features = featurizer.transform_dataset(valid)
        kernels = _view_kernels(featurizer.training_features, n_jobs)
        for C in grid:
            cfg = dataclasses.replace(mkl_cfg, C=float(C))
            predicted, _, _, _ = _fit_and_score(featurizer.training_features, kernels, labels[train_index],
                                                valid_features, labels[valid_index], featurizer.views, cfg, uniform)
            rows.append({"fold": fold, "C": float(C), "f_measure": detection_scores(labels[valid_index], predicted)[2]})
    frame = pd.DataFrame(rows).groupby("C")["f_measure"].agg(["mean", "std"]).reset_index()
    best = frame.sort_values(["mean", "C"], ascending=[False, True]).iloc[0]
    logger.info("Selected C", extra={"C": float(best["C"]), "f_measure": float(best["mean"])})
    return float(best["C"]), frame
