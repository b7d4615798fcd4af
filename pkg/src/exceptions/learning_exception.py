"""Exceptions for feature selection, SVM and MKL training"""


class LearningError(Exception):
    """Base class of training and prediction problems"""
    pass


class InvalidConfigError(LearningError):
    """Raise if a hyperparameter is out of range"""
    pass


class SingleClassError(LearningError):
    """Raise if training labels contain only one class"""
    pass


class NonSymmetricKernelError(LearningError):
    """Raise if a kernel matrix is not symmetric"""
    pass


class ConvergenceError(LearningError):
    """Raise if the final SVM solve stopped before meeting its KKT tolerance"""
    pass


class MissingViewError(LearningError):
    """Raise if a sample lacks a view the model was trained on"""
    pass


class ModelFormatError(LearningError):
    """Raise if a model file has an unknown format tag or is inconsistent"""
    pass
