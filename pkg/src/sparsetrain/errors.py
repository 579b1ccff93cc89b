"""Exception hierarchy shared by every sparsetrain module."""

from __future__ import annotations


class SparseTrainError(Exception):
    """Base class for all errors raised by sparsetrain."""


class DomainError(SparseTrainError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ConfigError(SparseTrainError, ValueError):
    """A parameter or configuration value failed validation.

    *field* names the offending parameter so the CLI can report it.
    """

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field
        self.reason = message
