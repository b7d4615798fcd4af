"""Exceptions for dataset loading and validation"""
from typing import Optional


class DatasetError(Exception):
    """Base class of every dataset problem"""
    pass


class DatasetFormatError(DatasetError):
    """Raise if a dataset line can not be parsed"""

    def __init__(self, message: str, line_no: Optional[int] = None) -> None:
        self.line_no = line_no
        prefix = f"line {line_no}: " if line_no is not None else ""
        super().__init__(prefix + message)


class DatasetInvariantError(DatasetError):
    """Raise if a parsed record violates a graph or sample invariant"""

    def __init__(self, sample_id: Optional[str], rule: str) -> None:
        self.sample_id = sample_id
        self.rule = rule
        super().__init__(f"sample {sample_id!r}: {rule}")


class ViewMismatchError(DatasetInvariantError):
    """Raise if samples of one dataset do not share the same views"""
    pass
