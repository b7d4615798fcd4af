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


"""Relabeling configuration"""
from dataclasses import dataclass

from src.constant import Defaults
from src.exceptions.learning_exception import InvalidConfigError
from src.utility import DictConfig


@dataclass(frozen=True)
class CwlConfig(DictConfig):
    """ Contextual relabeling and embedding options

    Here is a list of available attributes of "CwlConfig" class:
        * h: number of relabeling iterations
        * compress: replace neighbourhood labels by 64-bit hashes at every height
        * normalize: cosine normalize each per-view vector
        * use_contexts: prefix labels with node contexts; false gives plain WL relabeling
        * separate_heights: key features by (height, label)
    """
    h: int = Defaults.H.value
    compress: bool = False
    normalize: bool = True
    use_contexts: bool = True
    separate_heights: bool = False

    def __post_init__(self) -> None:
        if isinstance(self.h, bool) or not isinstance(self.h, int) or self.h < 0:
            raise InvalidConfigError(f"h must be a non-negative integer, got {self.h!r}")
        for name in ("compress", "normalize", "use_contexts", "separate_heights"):
            if not isinstance(getattr(self, name), bool):
                raise InvalidConfigError(f"{name} must be a boolean")

    def vocabulary_key(self) -> tuple:
        """Options that change feature keys; a vocabulary only serves configs with the same key"""
        return self.h, self.compress, self.use_contexts, self.separate_heights
