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


"""Versioned JSON model files"""
import logging

from typing import Any, Dict

from src.constant import FileFormat
from src.cwlk.config import CwlConfig
from src.cwlk.sparse_vector import SparseVector
from src.cwlk.vocabulary import Vocabulary
from src.exceptions.learning_exception import ModelFormatError
from src.featureselection.chi2 import SelectionMask
from src.mkl.mkl import MklConfig, MklModel
from src.svm.smo import DualSolution
from src.utility import read_json, write_json

logger = logging.getLogger(__name__)


def _vector_to_dict(vector: SparseVector) -> Dict[str, Any]:
    return {"dimension": vector.dimension, "indices": [int(index) for index in vector.indices],
            "values": [float(value) for value in vector.values]}


def _vector_from_dict(document: Dict[str, Any]) -> SparseVector:
    return SparseVector(document["indices"], document["values"], int(document["dimension"]))


def model_to_dict(model: MklModel) -> Dict[str, Any]:
    return {
        "format": FileFormat.MODEL.value,
        "config": model.config.to_dict(),
        "cwl_config": model.cwl_config.to_dict() if model.cwl_config is not None else None,
        "uniform": model.uniform,
        "betas": dict(model.betas),
        "normalized_betas": model.normalized_betas(),
        "alpha": model.alpha.to_dict(),
        "sample_ids": list(model.sample_ids),
        "labels": [int(label) for label in model.labels],
        "composite_weights": _vector_to_dict(model.composite_weights),
        "view_offsets": {view: list(offset) for view, offset in model.view_offsets.items()},
        "objective_trace": [float(value) for value in model.objective_trace],
        "converged": model.converged,
        "vocabularies": {view: vocabulary.to_dict() for view, vocabulary in model.vocabularies.items()},
        "masks": {view: mask.to_dict() if mask is not None else None for view, mask in model.masks.items()},
        "vocabulary_sizes": {view: list(sizes) for view, sizes in model.vocabulary_sizes.items()},
    }


def model_from_dict(document: Dict[str, Any]) -> MklModel:
    """ Rebuild a model document
    Raises:
        ModelFormatError: raise if the format tag is unknown or a field is missing or inconsistent
    """
    if not isinstance(document, dict) or document.get("format") != FileFormat.MODEL.value:
        raise ModelFormatError(f"expected format {FileFormat.MODEL.value!r}")
    try:
        model = MklModel(
            betas={view: float(beta) for view, beta in document["betas"].items()},
            alpha=DualSolution.from_dict(document["alpha"]),
            composite_weights=_vector_from_dict(document["composite_weights"]),
            view_offsets={view: (int(start), int(length)) for view, (start, length)
                          in document["view_offsets"].items()},
            config=MklConfig.from_dict(document["config"]),
            uniform=bool(document["uniform"]),
            objective_trace=[float(value) for value in document["objective_trace"]],
            converged=bool(document["converged"]),
            sample_ids=list(document["sample_ids"]),
            labels=[int(label) for label in document["labels"]],
            cwl_config=CwlConfig.from_dict(document["cwl_config"]) if document["cwl_config"] is not None else None,
            vocabularies={view: Vocabulary.from_dict(item) for view, item in document["vocabularies"].items()},
            masks={view: SelectionMask.from_dict(item) if item is not None else None
                   for view, item in document["masks"].items()},
            vocabulary_sizes={view: (int(before), int(after)) for view, (before, after)
                              in document["vocabulary_sizes"].items()},
        )
    except (KeyError, TypeError, ValueError) as error:
        raise ModelFormatError(f"malformed model document: {error}") from error
    if sorted(model.betas) != sorted(model.view_offsets):
        raise ModelFormatError("betas and view offsets name different views")
    if len(model.alpha.alpha) != len(model.labels):
        raise ModelFormatError("alpha and labels differ in length")
    return model


def save_model(model: MklModel, path: str) -> None:
    """Write the model with sorted keys; equal models give identical bytes"""
    write_json(model_to_dict(model), path)
    logger.info("Saved model", extra={"path": path, "views": model.views})


def load_model(path: str) -> MklModel:
    try:
        document = read_json(path)
    except ValueError as error:
        raise ModelFormatError(f"{path} is not a json document: {error}") from error
    return model_from_dict(document)
