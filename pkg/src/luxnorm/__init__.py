"""Toolkit for Luxembourgish text normalization.

Synthesizes parallel training data from spelling-variant statistics,
normalizes noisy text with a dictionary/edit-distance/n-gram pipeline,
and evaluates normalizers with word-aligned metrics and a rule-based
minimum-functionality test suite.
"""

__version__ = "0.1.0"

from luxnorm.errors import (
    ConfigError,
    DictionaryLookupError,
    LuxnormError,
    ParseError,
    ProtocolError,
)

__all__ = [
    "ConfigError",
    "DictionaryLookupError",
    "LuxnormError",
    "ParseError",
    "ProtocolError",
    "__version__",
]
