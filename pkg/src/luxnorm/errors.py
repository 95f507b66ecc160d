"""Exception hierarchy shared across the toolkit."""

from __future__ import annotations


class LuxnormError(Exception):
    """Base class for all toolkit errors."""


class ParseError(LuxnormError):
    """A data file could not be parsed; carries path and line number."""

    def __init__(self, message: str, path: str | None = None, line: int | None = None):
        location = ""
        if path is not None:
            location = f"{path}: " if line is None else f"{path}:{line}: "
        super().__init__(f"{location}{message}")
        self.path = path
        self.line = line


class DictionaryLookupError(LuxnormError, KeyError):
    """Requested lemma is not present in the variant dictionary."""


class ProtocolError(LuxnormError):
    """An external normalizer violated the line protocol."""


class ConfigError(LuxnormError):
    """Invalid or incomplete run configuration."""
