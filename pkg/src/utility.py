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


"""Utility functions shared by the featurization, learning and CLI layers"""
import contextlib
import dataclasses
import hashlib
import json
import numbers
import os
import tempfile
import time

from typing import Any, Dict, Iterator, Iterable, Mapping, Optional, Tuple

import numpy as np


def stable_hash64(text: str) -> str:
    """ 64-bit stable hash of a string, independent of PYTHONHASHSEED

    Args:
        text: label string

    Returns:
        16 lowercase hex digits
    """
    return hashlib.blake2b(text.encode("utf-8"), digest_size=8).hexdigest()


def canonical_json(document: Any) -> str:
    """ Serialize with sorted keys and no insignificant whitespace
    Args:
        document: json compatible object

    Returns:
        byte-stable text
    """
    return json.dumps(document, sort_keys=True, ensure_ascii=False, separators=(",", ":"))


@contextlib.contextmanager
def atomic_write(path: str, mode: str = "w", encoding: str = "utf-8") -> Iterator:
    """ Open a temporary sibling of path and move it in place on success

    Notes:
        * On any exception the temporary file is removed and path is left untouched
    """
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp_path = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        kwargs = {} if "b" in mode else {"encoding": encoding, "newline": ""}
        with os.fdopen(fd, mode, **kwargs) as handle:
            yield handle
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.remove(tmp_path)
        raise


def write_json(document: Any, path: str, indent: bool = False) -> None:
    """ Write json atomically with sorted keys
    Args:
        document:
        path:
        indent: pretty print for human facing reports
    """
    with atomic_write(path) as handle:
        if indent:
            handle.write(json.dumps(document, sort_keys=True, ensure_ascii=False, indent=2))
            handle.write("\n")
        else:
            handle.write(canonical_json(document))


def read_json(path: str) -> Any:
    with open(path, "r", encoding="utf-8") as handle:
        return json.load(handle)


def check_binary_labels(labels: Iterable[int]) -> np.ndarray:
    """ Convert labels to an int array and verify they are -1/+1
    Args:
        labels:

    Returns:
        label array

    Raises:
        ValueError: raise if a label is not -1 or +1
    """
    y = np.asarray(list(labels), dtype=np.int64)
    if y.size and not np.all(np.isin(y, (-1, 1))):
        raise ValueError("Labels must be -1 or +1")
    return y


def is_real(value: Any) -> bool:
    """True for finite-checkable numbers; booleans and strings are rejected"""
    return isinstance(value, numbers.Real) and not isinstance(value, bool)


def is_count(value: Any) -> bool:
    return isinstance(value, numbers.Integral) and not isinstance(value, bool)


class StageTimer:
    """ Collect wall times of named stages for run manifests
    An example of using StageTimer::

        timer = StageTimer()
        with timer.stage("featurize"):
            ...
        timer.wall_times  # {'featurize': 0.42}
    """

    def __init__(self) -> None:
        self.wall_times: Dict[str, float] = {}

    @contextlib.contextmanager
    def stage(self, name: str) -> Iterator[None]:
        start = time.perf_counter()
        try:
            yield
        finally:
            self.wall_times[name] = self.wall_times.get(name, 0.) + time.perf_counter() - start

    def items(self) -> Iterable[Tuple[str, float]]:
        return self.wall_times.items()


class DictConfig:
    """ Mixin giving configuration dataclasses a dict / YAML surface

    Notes:
        * Unknown keys are rejected so typos in YAML files surface as errors
    """

    @classmethod
    def from_dict(cls, document: Optional[Dict[str, Any]]):
        from src.exceptions.learning_exception import InvalidConfigError

        if document is not None and not isinstance(document, Mapping):
            raise InvalidConfigError(f"{cls.__name__} settings must be a mapping, got {document!r}")
        document = dict(document or {})
        names = {item.name for item in dataclasses.fields(cls)}
        unknown = sorted(set(document) - names)
        if unknown:
            raise InvalidConfigError(f"Unknown {cls.__name__} keys: {unknown}")
        return cls(**document)

    def to_dict(self) -> Dict[str, Any]:
        return dataclasses.asdict(self)
