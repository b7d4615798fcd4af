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


""" viewkernel command line

Sub-commands: gen, train, predict, localize, eval, kernel, bench.
Exit codes: 0 success, 1 usage or configuration error, 2 data or invariant error, 3 non-convergence.
"""
import argparse
import logging
import os
import sys

from typing import Any, Dict, List, Optional, Tuple

import pandas as pd
import yaml

from src.cli.manifest import RunManifest
from src.constant import Defaults
from src.cwlk.config import CwlConfig
from src.cwlk.embedding import export_embeddings
from src.cwlk.kernel import kernel_matrix
from src.cwlk.vocabulary import build_vocabulary, save_vocabulary
from src.exceptions.dataset_exception import DatasetError
from src.exceptions.evaluation_exception import MissingReportError
from src.exceptions.generator_exception import GeneratorConfigError
from src.exceptions.kernel_exception import KernelError
from src.exceptions.learning_exception import (ConvergenceError, InvalidConfigError, LearningError,
                                               MissingViewError)
from src.featureselection.chi2 import save_mask
from src.graphmodel.dataset_io import load_dataset, save_dataset
from src.cwlk.embedding import embed
from src.localize.mscore import interpret_dataset
from src.localize.report_io import (load_reports, read_predictions_csv, report_path, save_report,
                                    write_localization_csv, write_predictions_csv)
from src.mkl.mkl import MklConfig
from src.mkl.model_io import save_model, load_model
from src.pipeline import train_model
from src.run_log import configure_logging
from src.synth.evaluation import evaluate, split_evaluation
from src.synth.generator import generate, load_gen_config
from src.utility import StageTimer, atomic_write, write_json

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_CONVERGENCE = 0, 1, 2, 3


class UsageError(Exception):
    """Raise if the command line can not be parsed"""
    pass


class _Parser(argparse.ArgumentParser):

    def error(self, message: str) -> None:
        raise UsageError(message)


def _read_yaml(path: str) -> Dict[str, Any]:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            document = yaml.safe_load(handle)
    except yaml.YAMLError as error:
        raise InvalidConfigError(f"{path} is not valid YAML: {error}") from error
    if document is None:
        return {}
    if not isinstance(document, dict):
        raise InvalidConfigError(f"{path} must hold a mapping")
    return document


def _section(document: Any, name: str) -> Dict[str, Any]:
    if document is None:
        return {}
    if not isinstance(document, dict):
        raise InvalidConfigError(f"{name} settings must be a mapping, got {document!r}")
    return dict(document)


def _add_relabel_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--h", type=int, default=None,
                        help=f"relabeling iterations (default {Defaults.H.value}); see --separate-heights for sink nodes")
    parser.add_argument("--compress", action="store_true", default=None, help="hash neighbourhood labels")
    parser.add_argument("--no-normalize", dest="normalize", action="store_false", default=None,
                        help="keep raw counts instead of unit vectors")
    parser.add_argument("--no-context", dest="use_contexts", action="store_false", default=None,
                        help="drop contexts (plain Weisfeiler-Lehman labels)")
    parser.add_argument("--separate-heights", action="store_true", default=None,
                        help="key features by height and label. Without it a node with no successors keeps its "
                             "label at every height and that feature is counted h + 1 times, so the kernel "
                             "differs from the sum of per-height kernels")


def _add_training_flags(parser: argparse.ArgumentParser) -> None:
    _add_relabel_flags(parser)
    parser.add_argument("--k-select", type=int, default=None,
                        help=f"chi-squared budget per view (default {Defaults.K_SELECT.value})")
    parser.add_argument("--C", type=float, default=None, help=f"box constraint (default {Defaults.C.value})")
    parser.add_argument("--p", type=float, default=None, help=f"weight norm (default {Defaults.P.value})")
    parser.add_argument("--tol", type=float, default=None, help="KKT tolerance of the SVM solver")
    parser.add_argument("--outer-tol", type=float, default=None, help="relative objective change to stop")
    parser.add_argument("--max-outer-iters", type=int, default=None, help="cap on SVM solves")
    parser.add_argument("--uniform", action="store_true", default=None, help="fix view weights to 1/|V|")
    parser.add_argument("--config", default=None, help="YAML file with cwl, mkl, k_select and uniform keys")


def relabel_config(args: argparse.Namespace, document: Optional[Dict[str, Any]] = None) -> CwlConfig:
    settings = _section(document, "cwl")
    for name in ("h", "compress", "normalize", "use_contexts", "separate_heights"):
        value = getattr(args, name, None)
        if value is not None:
            settings[name] = value
    return CwlConfig.from_dict(settings)


def training_config(args: argparse.Namespace) -> Tuple[CwlConfig, MklConfig, Optional[int], bool]:
    """ Resolve defaults, then the YAML file, then explicit flags
    Raises:
        InvalidConfigError: raise if a key or value is invalid
    """
    document = _read_yaml(args.config) if args.config else {}
    unknown = sorted(set(document) - {"cwl", "mkl", "k_select", "uniform"})
    if unknown:
        raise InvalidConfigError(f"unknown training config keys {unknown}")
    cwl = relabel_config(args, document.get("cwl"))
    mkl = _section(document.get("mkl"), "mkl")
    svm = _section(mkl.get("svm"), "svm")
    for flag, key in (("C", "C"), ("p", "p"), ("outer_tol", "outer_tol"), ("max_outer_iters", "max_outer_iters")):
        if getattr(args, flag) is not None:
            mkl[key] = getattr(args, flag)
    if args.tol is not None:
        svm["tol"] = args.tol
    mkl["svm"] = svm
    k_select = document.get("k_select", Defaults.K_SELECT.value)
    if args.k_select is not None:
        k_select = args.k_select
    if k_select is not None and (isinstance(k_select, bool) or not isinstance(k_select, int) or k_select < 1):
        raise InvalidConfigError(f"k_select must be a positive integer, got {k_select!r}")
    uniform = bool(args.uniform) if args.uniform is not None else document.get("uniform", False)
    if not isinstance(uniform, bool):
        raise InvalidConfigError(f"uniform must be a boolean, got {uniform!r}")
    return cwl, MklConfig.from_dict(mkl), k_select, uniform


def cmd_gen(args: argparse.Namespace) -> int:
    timer = StageTimer()
    cfg = load_gen_config(args.config)
    with timer.stage("generate"):
        dataset = generate(cfg, n_jobs=args.n_jobs)
    with timer.stage("write"):
        save_dataset(dataset, args.out)
    RunManifest("gen", config=cfg.to_dict(), inputs={"config": args.config}, outputs={"dataset": args.out},
                wall_times=dict(timer.wall_times)).write(args.out)
    return EXIT_OK


def cmd_train(args: argparse.Namespace) -> int:
    timer = StageTimer()
    cwl, mkl, k_select, uniform = training_config(args)
    with timer.stage("load"):
        dataset = load_dataset(args.dataset)
    with timer.stage("train"):
        model = train_model(dataset, cwl, mkl, k_select=k_select, uniform=uniform, n_jobs=args.n_jobs)
    if not model.alpha.converged:
        raise ConvergenceError(f"final SVM solve stopped with KKT violation {model.alpha.max_violation:.3g} "
                               f"above tol {mkl.svm.tol:.3g}")
    outputs = {"model": args.model_out, "training_report": f"{args.model_out}.training.json"}
    with timer.stage("write"):
        save_model(model, args.model_out)
        write_json({"betas": model.betas, "normalized_betas": model.normalized_betas(),
                    "vocabulary_sizes": {view: {"before": before, "after": after}
                                         for view, (before, after) in model.vocabulary_sizes.items()},
                    "objective_trace": model.objective_trace, "converged": model.converged,
                    "svm_passes": model.alpha.passes}, outputs["training_report"], indent=True)
        if args.vocab_dir:
            os.makedirs(args.vocab_dir, exist_ok=True)
            for view, vocabulary in model.vocabularies.items():
                path = os.path.join(args.vocab_dir, f"{view}.vocab.tsv")
                save_vocabulary(vocabulary, path)
                outputs[f"vocabulary:{view}"] = path
                if model.masks.get(view) is not None:
                    path = os.path.join(args.vocab_dir, f"{view}.mask.tsv")
                    save_mask(model.masks[view], path, vocabulary)
                    outputs[f"mask:{view}"] = path
    RunManifest("train", config={"cwl": cwl.to_dict(), "mkl": mkl.to_dict(), "k_select": k_select,
                                 "uniform": uniform},
                inputs={"dataset": args.dataset}, outputs=outputs, wall_times=dict(timer.wall_times)).write(args.model_out)
    return EXIT_OK


def cmd_predict(args: argparse.Namespace) -> int:
    timer = StageTimer()
    with timer.stage("load"):
        model = load_model(args.model)
        dataset = load_dataset(args.dataset)
    with timer.stage("predict"):
        reports = interpret_dataset(dataset, model, n_jobs=args.n_jobs)
    write_predictions_csv([(report.sample_id, report.prediction, report.raw_score) for report in reports], args.out)
    RunManifest("predict", inputs={"model": args.model, "dataset": args.dataset}, outputs={"predictions": args.out},
                wall_times=dict(timer.wall_times)).write(args.out)
    return EXIT_OK


def cmd_localize(args: argparse.Namespace) -> int:
    timer = StageTimer()
    with timer.stage("load"):
        model = load_model(args.model)
        dataset = load_dataset(args.dataset)
    with timer.stage("interpret"):
        reports = interpret_dataset(dataset, model, n_jobs=args.n_jobs)
    emitted = [report for report in reports if args.all or report.prediction == 1]
    with timer.stage("write"):
        os.makedirs(args.out_dir, exist_ok=True)
        for report in emitted:
            save_report(report, report_path(args.out_dir, report.sample_id))
        csv_path = os.path.join(args.out_dir, "localization.csv")
        write_localization_csv(emitted, csv_path, top_k=args.top_k)
    RunManifest("localize", config={"top_k": args.top_k, "all": args.all},
                inputs={"model": args.model, "dataset": args.dataset},
                outputs={"reports": args.out_dir, "localization": csv_path},
                wall_times=dict(timer.wall_times)).write(args.out_dir)
    return EXIT_OK


def cmd_eval(args: argparse.Namespace) -> int:
    timer = StageTimer()
    with timer.stage("load"):
        predictions = read_predictions_csv(args.predictions)
        reports = load_reports(args.reports)
        dataset = load_dataset(args.dataset)
    with timer.stage("evaluate"):
        record = evaluate(predictions, reports, dataset, k=args.k)
    write_json(record.to_dict(), args.out, indent=True)
    outputs = {"metrics": args.out}
    if args.csv:
        with atomic_write(args.csv) as handle:
            record.to_frame().to_csv(handle, index=False, lineterminator="\n")
        outputs["metrics_csv"] = args.csv
    RunManifest("eval", config={"k": args.k},
                inputs={"predictions": args.predictions, "reports": args.reports, "dataset": args.dataset},
                outputs=outputs, wall_times=dict(timer.wall_times)).write(args.out)
    return EXIT_OK


def cmd_kernel(args: argparse.Namespace) -> int:
    timer = StageTimer()
    cfg = relabel_config(args)
    with timer.stage("load"):
        dataset = load_dataset(args.dataset)
    if args.view not in dataset.view_names:
        raise MissingViewError(f"unknown view {args.view!r}, dataset has {list(dataset.view_names)}")
    graphs = dataset.graphs(args.view)
    with timer.stage("featurize"):
        vocabulary = build_vocabulary(graphs, cfg, view=args.view, n_jobs=args.n_jobs)
        vectors = [embed(graph, vocabulary, cfg)[0] for graph in graphs]
    with timer.stage("kernel"):
        gram = kernel_matrix(vectors, n_jobs=args.n_jobs)
    frame = pd.DataFrame(gram, index=dataset.ids, columns=dataset.ids)
    with atomic_write(args.out) as handle:
        frame.to_csv(handle, index_label="sample_id", float_format="%.17g", lineterminator="\n")
    outputs = {"kernel": args.out}
    if args.embeddings:
        export_embeddings(dataset.ids, vectors, args.embeddings)
        outputs["embeddings"] = args.embeddings
    RunManifest("kernel", config={"view": args.view, "cwl": cfg.to_dict()}, inputs={"dataset": args.dataset},
                outputs=outputs, wall_times=dict(timer.wall_times)).write(args.out)
    return EXIT_OK


def cmd_bench(args: argparse.Namespace) -> int:
    timer = StageTimer()
    cwl, mkl, k_select, _ = training_config(args)
    with timer.stage("load"):
        dataset = load_dataset(args.dataset)
    with timer.stage("bench"):
        table = split_evaluation(dataset, cwl, mkl, runs=args.runs, test_size=args.test_size, seed=args.seed,
                                 k_select=k_select, n_jobs=args.n_jobs)
    with atomic_write(args.out) as handle:
        table.to_csv(handle, index=False, float_format="%.6g", lineterminator="\n")
    RunManifest("bench", config={"cwl": cwl.to_dict(), "mkl": mkl.to_dict(), "k_select": k_select,
                                 "runs": args.runs, "test_size": args.test_size, "seed": args.seed},
                inputs={"dataset": args.dataset}, outputs={"table": args.out},
                wall_times=dict(timer.wall_times)).write(args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="viewkernel", description="Contextual WL kernels, kernel combination and localization")
    parser.add_argument("--log-level", default="WARNING", help="logging level name")
    parser.add_argument("--log-file", default=None, help="also write JSON log records to this file")
    parser.add_argument("--log-folder", default=None, help="write a timestamped log file into this folder")
    parser.add_argument("--n-jobs", type=int, default=1, help="joblib workers")
    commands = parser.add_subparsers(dest="command", required=True)

    gen = commands.add_parser("gen", help="generate a synthetic dataset")
    gen.add_argument("config", help="YAML generator configuration")
    gen.add_argument("out", help="dataset file to write")
    gen.set_defaults(handler=cmd_gen, primary="out")

    train = commands.add_parser("train", help="train a kernel combination model")
    train.add_argument("dataset")
    train.add_argument("model_out")
    train.add_argument("--vocab-dir", default=None, help="write vocabularies and selection masks here")
    _add_training_flags(train)
    train.set_defaults(handler=cmd_train, primary="model_out")

    predict = commands.add_parser("predict", help="write sample_id,prediction,raw_score rows")
    predict.add_argument("model")
    predict.add_argument("dataset")
    predict.add_argument("out")
    predict.set_defaults(handler=cmd_predict, primary="out")

    localize = commands.add_parser("localize", help="write m-score reports and the ranked class table")
    localize.add_argument("model")
    localize.add_argument("dataset")
    localize.add_argument("out_dir")
    localize.add_argument("--top-k", type=int, default=Defaults.TOP_K.value)
    localize.add_argument("--all", action="store_true", help="also emit reports of samples predicted benign")
    localize.set_defaults(handler=cmd_localize, primary="out_dir")

    evaluation = commands.add_parser("eval", help="detection and top-k localization metrics")
    evaluation.add_argument("predictions")
    evaluation.add_argument("reports", help="folder written by localize")
    evaluation.add_argument("dataset")
    evaluation.add_argument("out")
    evaluation.add_argument("--k", type=int, default=Defaults.TOP_K.value)
    evaluation.add_argument("--csv", default=None, help="also write the metrics as a one-row CSV")
    evaluation.set_defaults(handler=cmd_eval, primary="out")

    kernel = commands.add_parser("kernel", help="write the Gram matrix of one view as CSV")
    kernel.add_argument("dataset")
    kernel.add_argument("out")
    kernel.add_argument("--view", required=True)
    kernel.add_argument("--embeddings", default=None, help="also export the embeddings")
    _add_relabel_flags(kernel)
    kernel.set_defaults(handler=cmd_kernel, primary="out")

    bench = commands.add_parser("bench", help="compare single views, uniform and learned weights")
    bench.add_argument("dataset")
    bench.add_argument("out")
    bench.add_argument("--runs", type=int, default=5)
    bench.add_argument("--test-size", type=float, default=0.3)
    bench.add_argument("--seed", type=int, default=0)
    _add_training_flags(bench)
    bench.set_defaults(handler=cmd_bench, primary="out")
    return parser


_INPUT_ROLES = ("config", "dataset", "model", "predictions", "reports")


def _fail(args: argparse.Namespace, error: Exception, code: int) -> int:
    """Log the error and leave a failed-run manifest next to the primary output"""
    kind = type(error).__name__
    logger.error(str(error), extra={"command": args.command, "kind": kind, "exit_code": code})
    inputs = {role: getattr(args, role) for role in _INPUT_ROLES if isinstance(getattr(args, role, None), str)}
    try:
        RunManifest(args.command, inputs=inputs, status="failed", exit_code=code,
                    error={"kind": kind, "message": str(error)}).write(getattr(args, args.primary))
    except OSError as write_error:
        logger.warning("Could not write the run manifest", extra={"command": args.command, "error": str(write_error)})
    return code


def main(argv: Optional[List[str]] = None) -> int:
    """ Run one sub-command
    Returns:
        process exit code
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as error:
        sys.stderr.write(f"viewkernel: error: {error}\n")
        return EXIT_USAGE
    try:
        configure_logging(args.log_level, log_file=args.log_file, folder_log=args.log_folder)
    except (ValueError, OSError) as error:
        sys.stderr.write(f"viewkernel: error: {error}\n")
        return _fail(args, error, EXIT_USAGE)
    try:
        return args.handler(args)
    except (UsageError, InvalidConfigError, GeneratorConfigError) as error:
        return _fail(args, error, EXIT_USAGE)
    except ConvergenceError as error:
        return _fail(args, error, EXIT_CONVERGENCE)
    except (DatasetError, KernelError, LearningError, MissingReportError, OSError) as error:
        return _fail(args, error, EXIT_DATA)


if __name__ == "__main__":
    sys.exit(main())
