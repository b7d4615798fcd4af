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


"""Sparse vectors for explicit graph embeddings and linear weights"""
from __future__ import annotations

from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

import numpy as np
import scipy.sparse

from src.exceptions.kernel_exception import DimensionMismatchError


class SparseVector:
    """ Index -> value map of fixed dimension

    Here is a list of available attributes of "SparseVector" class:
        * indices: sorted, unique int64 feature indices
        * values: float64 values parallel to indices, never zero
        * dimension: size of the feature space

    Embeddings hold non-negative counts; weight vectors may carry either sign.
    """

    __slots__ = ("indices", "values", "dimension")

    def __init__(self, indices: Iterable[int] = (), values: Iterable[float] = (), dimension: int = 0) -> None:
        indices = np.asarray(list(indices) if not isinstance(indices, np.ndarray) else indices, dtype=np.int64)
        values = np.asarray(list(values) if not isinstance(values, np.ndarray) else values, dtype=np.float64)
        if indices.shape != values.shape:
            raise ValueError("indices and values must have the same length")
        if dimension < 0:
            raise ValueError("dimension must be non-negative")
        order = np.argsort(indices, kind="stable")
        indices, values = indices[order], values[order]
        if indices.size and (indices[0] < 0 or indices[-1] >= dimension):
            raise DimensionMismatchError(f"index out of range for dimension {dimension}")
        if indices.size > 1 and np.any(indices[1:] == indices[:-1]):
            raise ValueError("duplicate indices")
        keep = values != 0.
        self.indices = indices[keep]
        self.values = values[keep]
        self.dimension = int(dimension)

    @classmethod
    def from_dict(cls, mapping: Mapping[int, float], dimension: int) -> "SparseVector":
        return cls(list(mapping.keys()), list(mapping.values()), dimension)

    @classmethod
    def from_dense(cls, array: Sequence[float]) -> "SparseVector":
        array = np.asarray(array, dtype=np.float64)
        indices = np.flatnonzero(array)
        return cls(indices, array[indices], array.size)

    @classmethod
    def zeros(cls, dimension: int) -> "SparseVector":
        return cls((), (), dimension)

    def to_dict(self) -> Dict[int, float]:
        return {int(index): float(value) for index, value in zip(self.indices, self.values)}

    def to_dense(self) -> np.ndarray:
        dense = np.zeros(self.dimension)
        dense[self.indices] = self.values
        return dense

    def items(self) -> Iterable[Tuple[int, float]]:
        return self.to_dict().items()

    def get(self, index: int, default: float = 0.) -> float:
        position = np.searchsorted(self.indices, index)
        if position < self.indices.size and self.indices[position] == index:
            return float(self.values[position])
        return default

    @property
    def nnz(self) -> int:
        return int(self.indices.size)

    def _check_dimension(self, other: "SparseVector") -> None:
        if self.dimension != other.dimension:
            raise DimensionMismatchError(f"dimension {self.dimension} != {other.dimension}")

    def dot(self, other: "SparseVector") -> float:
        """ Inner product over shared indices
        Raises:
            DimensionMismatchError: raise if the dimensions differ
        """
        self._check_dimension(other)
        _, mine, theirs = np.intersect1d(self.indices, other.indices, assume_unique=True, return_indices=True)
        return float(np.dot(self.values[mine], other.values[theirs]))

    def norm(self) -> float:
        return float(np.sqrt(np.dot(self.values, self.values)))

    def scale(self, factor: float) -> "SparseVector":
        return SparseVector(self.indices, self.values * factor, self.dimension)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SparseVector):
            return NotImplemented
        return (self.dimension == other.dimension and np.array_equal(self.indices, other.indices)
                and np.array_equal(self.values, other.values))

    def __repr__(self) -> str:
        return f"SparseVector(dimension={self.dimension}, entries={self.to_dict()})"


def stack_vectors(vectors: Sequence[SparseVector], dimension: Optional[int] = None) -> scipy.sparse.csr_matrix:
    """ Stack vectors as the rows of a CSR matrix
    Args:
        vectors: vectors of one common dimension
        dimension: required when vectors is empty

    Returns:
        len(vectors) x dimension CSR matrix

    Raises:
        DimensionMismatchError: raise if dimensions differ
    """
    if dimension is None:
        dimension = vectors[0].dimension if vectors else 0
    for vector in vectors:
        if vector.dimension != dimension:
            raise DimensionMismatchError(f"dimension {vector.dimension} != {dimension}")
    indptr = np.zeros(len(vectors) + 1, dtype=np.int64)
    indptr[1:] = np.cumsum([vector.nnz for vector in vectors])
    indices = np.concatenate([vector.indices for vector in vectors]) if vectors else np.zeros(0, dtype=np.int64)
    values = np.concatenate([vector.values for vector in vectors]) if vectors else np.zeros(0)
    return scipy.sparse.csr_matrix((values, indices, indptr), shape=(len(vectors), dimension))


def row_vector(matrix: scipy.sparse.csr_matrix, row: int) -> SparseVector:
    start, end = matrix.indptr[row], matrix.indptr[row + 1]
    return SparseVector(matrix.indices[start:end].copy(), matrix.data[start:end].copy(), matrix.shape[1])


def concatenate(blocks: Sequence[SparseVector]) -> SparseVector:
    """Concatenate vectors into one vector over the joined feature space"""
    offset = 0
    indices, values = [], []
    for block in blocks:
        indices.append(block.indices + offset)
        values.append(block.values)
        offset += block.dimension
    if not blocks:
        return SparseVector.zeros(0)
    return SparseVector(np.concatenate(indices), np.concatenate(values), offset)
