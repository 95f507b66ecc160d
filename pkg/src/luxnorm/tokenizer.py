"""Whitespace tokenization with punctuation detachment and clitic handling.

Luxembourgish attaches article clitics (d', l', m', t', z') to the
following word; those stay part of the token. Sentence punctuation is
split off so that word-level corruption and normalization never touch it.
"""

from __future__ import annotations

import re

# Punctuation detached from token edges. Everything else (hyphens,
# apostrophes, ellipses) stays inside the token.
PUNCT_CHARS = frozenset('.,!?;:„“"()')

# Attach to the preceding token when re-joining; „ and ( attach forward.
_CLOSING = frozenset('.,!?;:)“"')
_OPENING = frozenset("(„")

_CLITIC_RE = re.compile(r"^([dDlLmMtTzZ]')(?=.)")


def tokenize(sentence: str) -> list[str]:
    """Split on whitespace, then peel punctuation off both token edges."""
    tokens: list[str] = []
    for chunk in sentence.split():
        leading: list[str] = []
        while chunk and chunk[0] in PUNCT_CHARS:
            leading.append(chunk[0])
            chunk = chunk[1:]
        trailing: list[str] = []
        while chunk and chunk[-1] in PUNCT_CHARS:
            trailing.append(chunk[-1])
            chunk = chunk[:-1]
        tokens.extend(leading)
        if chunk:
            tokens.append(chunk)
        tokens.extend(reversed(trailing))
    return tokens


def detokenize(tokens: list[str]) -> str:
    """Re-join tokens, re-attaching punctuation to its neighbor.

    Produces a canonical spacing: single spaces between words, closing
    punctuation glued to the left, opening punctuation glued to the right.
    """
    parts: list[str] = []
    glue_next = False
    for token in tokens:
        if not parts:
            parts.append(token)
        elif glue_next or token in _CLOSING:
            parts[-1] += token
        else:
            parts.append(token)
        glue_next = token in _OPENING
    return " ".join(parts)


def is_punctuation(token: str) -> bool:
    """True for tokens made entirely of detachable punctuation."""
    return bool(token) and all(ch in PUNCT_CHARS for ch in token)


def split_clitic(token: str) -> tuple[str, str]:
    """Split a leading article clitic from a token.

    Returns (prefix, core); prefix is empty when there is no clitic.
    """
    match = _CLITIC_RE.match(token)
    if match:
        return match.group(1), token[match.end():]
    return "", token


def apply_case_pattern(pattern: str, word: str) -> str:
    """Transfer the casing pattern of `pattern` onto `word`.

    Recognizes all-upper, title-case, and all-lower patterns; anything
    else (mixed case) leaves `word` as written.
    """
    if not pattern or not word:
        return word
    if pattern.isupper() and len(pattern) > 1:
        return word.upper()
    if pattern[0].isupper() and (len(pattern) == 1 or pattern[1:].islower()):
        return word[0].upper() + word[1:]
    if pattern.islower():
        return word.lower()
    return word
