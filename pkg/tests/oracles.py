"""Independent reference implementations used to verify the real ones.

Everything here favors obviousness over speed: plain recursion and
exhaustive enumeration, no shared code with the package under test.
"""

from __future__ import annotations

from functools import lru_cache

from luxnorm.align import GAP, ScoringScheme


def levenshtein_recursive(a: str, b: str) -> int:
    """Textbook recursive edit distance; exponential, short strings only."""
    if not a:
        return len(b)
    if not b:
        return len(a)
    if a[-1] == b[-1]:
        same = levenshtein_recursive(a[:-1], b[:-1])
    else:
        same = levenshtein_recursive(a[:-1], b[:-1]) + 1
    return min(
        same,
        levenshtein_recursive(a[:-1], b) + 1,
        levenshtein_recursive(a, b[:-1]) + 1,
    )


def damerau_levenshtein(a: str, b: str) -> int:
    """Unrestricted Damerau-Levenshtein distance (Lowrance-Wagner).

    Counts insertions, deletions, substitutions, and transpositions of
    adjacent characters, with no restriction against editing a substring
    more than once. Distance <= k is exactly "reachable by <= k single
    edits", which is what neighborhood generation produces.
    """
    la, lb = len(a), len(b)
    maxdist = la + lb
    d = [[maxdist] * (lb + 2) for _ in range(la + 2)]
    for i in range(la + 1):
        d[i + 1][1] = i
    for j in range(lb + 1):
        d[1][j + 1] = j
    last_row: dict[str, int] = {}
    for i in range(1, la + 1):
        last_col = 0
        for j in range(1, lb + 1):
            row = last_row.get(b[j - 1], 0)
            col = last_col
            if a[i - 1] == b[j - 1]:
                cost = 0
                last_col = j
            else:
                cost = 1
            d[i + 1][j + 1] = min(
                d[i][j] + cost,
                d[i + 1][j] + 1,
                d[i][j + 1] + 1,
                d[row][col] + (i - row - 1) + 1 + (j - col - 1),
            )
        last_row[a[i - 1]] = i
    return d[la + 1][lb + 1]


def _pair_score(x: object, y: object, scheme: ScoringScheme) -> float:
    if x is GAP or y is GAP:
        return scheme.gap_penalty
    sim = 1.0 if x == y else 1.0 - levenshtein_recursive(x, y) / max(len(x), len(y))
    return scheme.mismatch_penalty + (scheme.match_bonus - scheme.mismatch_penalty) * sim


def enumerate_pair_alignments(a, b):
    """Yield every global alignment of two sequences as column lists."""
    if not a and not b:
        yield []
        return
    if a and b:
        for rest in enumerate_pair_alignments(a[1:], b[1:]):
            yield [(a[0], b[0])] + rest
    if b:
        for rest in enumerate_pair_alignments(a, b[1:]):
            yield [(GAP, b[0])] + rest
    if a:
        for rest in enumerate_pair_alignments(a[1:], b):
            yield [(a[0], GAP)] + rest


def brute_force_pair_value(a, b, scheme: ScoringScheme) -> float:
    return max(
        sum(_pair_score(x, y, scheme) for x, y in cols)
        for cols in enumerate_pair_alignments(tuple(a), tuple(b))
    )


def _column_score(x: object, y: object, z: object, scheme: ScoringScheme) -> float:
    return (
        _pair_score(x, y, scheme)
        + _pair_score(x, z, scheme)
        + _pair_score(y, z, scheme)
    )


def enumerate_triple_alignments(o, p, g):
    """Yield every 3-way alignment as column lists. Explodes fast."""
    if not o and not p and not g:
        yield []
        return
    for mo, mp, mg in (
        (1, 1, 1), (1, 1, 0), (1, 0, 1), (0, 1, 1), (1, 0, 0), (0, 1, 0), (0, 0, 1),
    ):
        if (mo and not o) or (mp and not p) or (mg and not g):
            continue
        column = (
            o[0] if mo else GAP,
            p[0] if mp else GAP,
            g[0] if mg else GAP,
        )
        for rest in enumerate_triple_alignments(o[mo:], p[mp:], g[mg:]):
            yield [column] + rest


def brute_force_triple_value(o, p, g, scheme: ScoringScheme) -> float:
    return max(
        sum(_column_score(x, y, z, scheme) for x, y, z in cols)
        for cols in enumerate_triple_alignments(tuple(o), tuple(p), tuple(g))
    )


def best_triple_value(o, p, g, scheme: ScoringScheme) -> float:
    """Optimal 3-way alignment value by memoized top-down recursion.

    Mathematically the same maximum as brute_force_triple_value (it maxes
    over the first column choice and recurses on the remainder) but fast
    enough to sweep large input spaces.
    """
    o = tuple(o)
    p = tuple(p)
    g = tuple(g)
    gp = scheme.gap_penalty

    def sim(x: str, y: str) -> float:
        if x == y:
            return 1.0
        return 1.0 - levenshtein_recursive(x, y) / max(len(x), len(y))

    span = scheme.match_bonus - scheme.mismatch_penalty
    base = scheme.mismatch_penalty

    @lru_cache(maxsize=None)
    def pscore(x: object, y: object) -> float:
        if x is GAP or y is GAP:
            return gp
        return base + span * sim(x, y)

    @lru_cache(maxsize=None)
    def rec(i: int, j: int, k: int) -> float:
        if i == len(o) and j == len(p) and k == len(g):
            return 0.0
        best = float("-inf")
        for mo, mp, mg in (
            (1, 1, 1), (1, 1, 0), (1, 0, 1), (0, 1, 1), (1, 0, 0), (0, 1, 0), (0, 0, 1),
        ):
            ni, nj, nk = i + mo, j + mp, k + mg
            if ni > len(o) or nj > len(p) or nk > len(g):
                continue
            x = o[i] if mo else GAP
            y = p[j] if mp else GAP
            z = g[k] if mg else GAP
            cand = pscore(x, y) + pscore(x, z) + pscore(y, z) + rec(ni, nj, nk)
            if cand > best:
                best = cand
        return best

    result = rec(0, 0, 0)
    rec.cache_clear()
    pscore.cache_clear()
    return result
