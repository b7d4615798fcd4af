"""Exceptions for the synthetic dataset generator"""


class GeneratorConfigError(Exception):
    """Raise if a generator configuration is invalid or impossible to satisfy"""
    pass
