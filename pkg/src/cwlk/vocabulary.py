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


"""Per-view vocabularies of contextual neighbourhood labels"""
import logging

from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence

import pandas as pd

from src.cwlk.config import CwlConfig
from src.cwlk.features import FeatureCounts, count_all
from src.cwlk.relabel import LabelCodec
from src.exceptions.kernel_exception import HeightMismatchError, KernelError
from src.graphmodel.graph import ContextualGraph
from src.utility import atomic_write

logger = logging.getLogger(__name__)


class Vocabulary:
    """ Bijection between contextual label strings and feature indices of one view

    Here is a list of available attributes of "Vocabulary" class:
        * view: view name
        * cfg: relabeling options the labels were produced with
        * labels: label of every index, index order

    Notes:
        * With compressed relabeling the labels are 16 hex digit hashes; readable() rebuilds their text
    """

    def __init__(self, labels: Sequence[str], view: str = "", cfg: CwlConfig = CwlConfig(),
                 codec: Optional[LabelCodec] = None, readable: Optional[Mapping[str, str]] = None) -> None:
        self._labels: List[str] = list(labels)
        self._index: Dict[str, int] = {label: index for index, label in enumerate(self._labels)}
        if len(self._index) != len(self._labels):
            raise KernelError(f"vocabulary of view {view!r} repeats a label")
        self.view = view
        self.cfg = cfg
        self._codec = codec
        self._readable: Dict[str, str] = dict(readable or {})

    @property
    def h(self) -> int:
        return self.cfg.h

    @property
    def labels(self) -> List[str]:
        return list(self._labels)

    def __len__(self) -> int:
        return len(self._labels)

    def __contains__(self, label: str) -> bool:
        return label in self._index

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Vocabulary):
            return NotImplemented
        return (self._labels == other._labels and self.view == other.view
                and self.cfg.vocabulary_key() == other.cfg.vocabulary_key())

    def index(self, label: str) -> int:
        return self._index[label]

    def get(self, label: str) -> Optional[int]:
        return self._index.get(label)

    def label(self, index: int) -> str:
        return self._labels[index]

    def readable(self, index: int) -> str:
        """Human readable contextual label of a feature index"""
        label = self._labels[index]
        if not self.cfg.compress:
            return label
        if label not in self._readable:
            if self._codec is None:
                raise KernelError(f"no readable text stored for compressed label {label}")
            self._readable[label] = self._codec.readable(label)
        return self._readable[label]

    def check_compatible(self, cfg: CwlConfig) -> None:
        """ Verify cfg produces the same kind of labels
        Raises:
            HeightMismatchError: raise if the vocabulary was built with another h
            KernelError: raise if another relabeling option differs
        """
        if cfg.h != self.cfg.h:
            raise HeightMismatchError(f"vocabulary of view {self.view!r} was built with h={self.cfg.h}, "
                                      f"got h={cfg.h}")
        if cfg.vocabulary_key() != self.cfg.vocabulary_key():
            raise KernelError(f"vocabulary of view {self.view!r} was built with other relabeling options")

    def to_dict(self) -> Dict[str, Any]:
        document = {"view": self.view, "labels": list(self._labels),
                    "readable": None, "config": self.cfg.to_dict()}
        if self.cfg.compress:
            document["readable"] = [self.readable(index) for index in range(len(self))]
        return document

    @classmethod
    def from_dict(cls, document: Mapping[str, Any]) -> "Vocabulary":
        cfg = CwlConfig.from_dict(document["config"])
        readable = None
        if document.get("readable") is not None:
            readable = dict(zip(document["labels"], document["readable"]))
        return cls(document["labels"], view=document["view"], cfg=cfg, readable=readable)


def vocabulary_from_counts(counts: Iterable[FeatureCounts], cfg: CwlConfig, view: str = "") -> Vocabulary:
    """ Union of the labels of already counted graphs, indexed in lexicographic order"""
    labels = set()
    codec = LabelCodec() if cfg.compress else None
    for item in counts:
        labels.update(item.labels())
        if codec is not None and item.codec is not None:
            codec.merge(item.codec)
    vocabulary = Vocabulary(sorted(labels), view=view, cfg=cfg, codec=codec)
    logger.debug("Built vocabulary", extra={"view": view, "size": len(vocabulary), "h": cfg.h})
    return vocabulary


def build_vocabulary(graphs: Sequence[ContextualGraph], cfg: CwlConfig, view: str = "",
                     n_jobs: int = 1) -> Vocabulary:
    """ Vocabulary of all contextual labels at heights 0..h across graphs
    Args:
        graphs: source graphs
        cfg: relabeling options
        view: view name recorded in the vocabulary
        n_jobs: joblib workers for relabeling

    Returns:
        Vocabulary with deterministic lexicographic indices
    """
    return vocabulary_from_counts(count_all(graphs, cfg, n_jobs), cfg, view)


def save_vocabulary(vocabulary: Vocabulary, path: str) -> None:
    """ Write "index<TAB>label" lines

    Notes:
        * Compressed vocabularies carry the readable text as a third column
    """
    frame = pd.DataFrame({"index": range(len(vocabulary)), "label": vocabulary.labels})
    if vocabulary.cfg.compress:
        frame["readable"] = [vocabulary.readable(index) for index in range(len(vocabulary))]
    with atomic_write(path) as handle:
        frame.to_csv(handle, sep="\t", header=False, index=False, lineterminator="\n")


def load_vocabulary(path: str, view: str = "", cfg: CwlConfig = CwlConfig()) -> Vocabulary:
    """ Read a vocabulary written by save_vocabulary
    Raises:
        KernelError: raise if indices are not contiguous from 0
    """
    try:
        frame = pd.read_csv(path, sep="\t", header=None, dtype=str, keep_default_na=False)
    except pd.errors.EmptyDataError:
        return Vocabulary([], view=view, cfg=cfg)
    indices = frame[0].astype(int).tolist()
    if indices != list(range(len(indices))):
        raise KernelError(f"vocabulary file {path} does not list indices 0..{len(indices) - 1} in order")
    labels = frame[1].tolist()
    readable = dict(zip(labels, frame[2].tolist())) if frame.shape[1] > 2 else None
    return Vocabulary(labels, view=view, cfg=cfg, readable=readable)
