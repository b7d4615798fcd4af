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


"""Gram matrices of explicit embeddings"""
import logging

from typing import Optional, Sequence

import numpy as np
import scipy.sparse
from joblib import Parallel, delayed

from src.cwlk.sparse_vector import SparseVector, stack_vectors
from src.exceptions.kernel_exception import DimensionMismatchError

logger = logging.getLogger(__name__)


def _block_product(rows: scipy.sparse.csr_matrix, columns_t: scipy.sparse.csc_matrix) -> np.ndarray:
    return np.asarray((rows @ columns_t).todense())


def cross_kernel(rows: Sequence[SparseVector], columns: Sequence[SparseVector]) -> np.ndarray:
    """ Rectangular matrix of inner products <rows[i], columns[j]>
    Raises:
        DimensionMismatchError: raise if the two sets live in different spaces
    """
    dimension = rows[0].dimension if rows else (columns[0].dimension if columns else 0)
    left = stack_vectors(rows, dimension)
    right = stack_vectors(columns, dimension)
    return _block_product(left, right.T.tocsc())


def kernel_matrix(vectors: Sequence[SparseVector], n_jobs: int = 1,
                  block_rows: Optional[int] = None) -> np.ndarray:
    """ Linear kernel matrix M[i][j] = <v_i, v_j>
    Args:
        vectors: embeddings of one dimension
        n_jobs: joblib workers over row blocks
        block_rows: rows per block, defaults to an even split over workers

    Returns:
        exactly symmetric dense matrix

    Raises:
        DimensionMismatchError: raise if the dimensions differ
    """
    if not vectors:
        return np.zeros((0, 0))
    dimensions = {vector.dimension for vector in vectors}
    if len(dimensions) > 1:
        raise DimensionMismatchError(f"vectors have dimensions {sorted(dimensions)}")
    matrix = stack_vectors(vectors)
    transposed = matrix.T.tocsc()
    n = matrix.shape[0]
    if n_jobs == 1 and block_rows is None:
        gram = _block_product(matrix, transposed)
    else:
        workers = n_jobs if n_jobs > 0 else 4
        size = block_rows or max(1, int(np.ceil(n / workers)))
        starts = range(0, n, size)
        blocks = Parallel(n_jobs=n_jobs)(delayed(_block_product)(matrix[start:start + size], transposed)
                                         for start in starts)
        gram = np.vstack(blocks)
    upper = np.triu(gram)
    return upper + np.triu(gram, 1).T
