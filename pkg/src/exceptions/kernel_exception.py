"""Exceptions for relabeling, embeddings and kernel matrices"""


class KernelError(Exception):
    """Base class of featurization problems"""
    pass


class DimensionMismatchError(KernelError):
    """Raise if sparse vectors or masks do not share a dimension"""
    pass


class HeightMismatchError(KernelError):
    """Raise if a vocabulary was built with another number of iterations"""
    pass


class TracePartitionError(KernelError):
    """Raise if node-local counts do not add up to the embedded counts"""
    pass
