"""Exceptions for detection and localization evaluation"""


class MissingReportError(Exception):
    """Raise if a detected malicious sample has no m-score report"""
    pass
