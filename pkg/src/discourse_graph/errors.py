"""Exception hierarchy shared by the pipeline modules."""

from __future__ import annotations


class DiscourseGraphError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(DiscourseGraphError):
    """Invalid configuration, missing input files, bad parameters."""


class DataError(DiscourseGraphError):
    """Input data violates a dataset-level contract."""


class RecordError(DataError):
    """A single malformed input line."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno
        self.message = message
