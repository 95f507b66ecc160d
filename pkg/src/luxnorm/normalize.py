"""Pipeline normalization: candidate generation, scoring, and selection.

Candidates for an unknown token come from three routes: reverse lookup in
the variant dictionary, a Norvig-style edit-distance neighborhood over the
lexicon, and character-n-gram tf-idf cosine similarity. Route scores are
combined linearly; known-correct tokens are never touched.

External normalizers plug in through a line protocol: one sentence per
line on stdin, exactly one normalized sentence per line on stdout.
"""

from __future__ import annotations

import math
import shlex
import subprocess
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from pathlib import Path
from typing import Sequence

from luxnorm.dictionary import ReverseIndex
from luxnorm.errors import ParseError, ProtocolError
from luxnorm.tokenizer import (
    apply_case_pattern,
    detokenize,
    is_punctuation,
    split_clitic,
    tokenize,
)

# a-z plus the accented letters of Luxembourgish orthography, both cases
_LOWER = "abcdefghijklmnopqrstuvwxyzäëéöüâêîôûàèù"
LUX_ALPHABET = _LOWER + _LOWER.upper()

# word-boundary padding for n-gram profiles; cannot occur in real tokens
_PAD_START = "\x02"
_PAD_END = "\x03"


class Lexicon:
    """Known-correct word forms with corpus frequencies."""

    def __init__(self, counts: dict[str, int]):
        for word, count in counts.items():
            if not word:
                raise ValueError("empty lexicon form")
            if count < 1:
                raise ValueError(f"non-positive count for {word!r}")
        self._counts = dict(counts)
        self._fold_counts: dict[str, int] = {}
        for word, count in counts.items():
            key = word.casefold()
            self._fold_counts[key] = self._fold_counts.get(key, 0) + count
        self._max_count = max(counts.values()) if counts else 1
        self._max_fold_count = max(self._fold_counts.values()) if counts else 1
        self._deletes_index: dict[str, list[str]] | None = None

    def deletes_index(self) -> dict[str, list[str]]:
        """Map every <=2-character deletion of every form back to the forms.

        Built lazily; used to shortlist distance-2 edit candidates without
        enumerating the full two-edit neighborhood of a query token. Two
        strings within two single edits always share a <=2-deletion.
        """
        if self._deletes_index is None:
            index: dict[str, list[str]] = {}
            for word in self._counts:
                for variant in _deletes_up_to_two(word):
                    bucket = index.setdefault(variant, [])
                    if not bucket or bucket[-1] != word:
                        bucket.append(word)
            self._deletes_index = index
        return self._deletes_index

    def __contains__(self, word: str) -> bool:
        return word in self._counts

    def __len__(self) -> int:
        return len(self._counts)

    def __iter__(self):
        return iter(self._counts)

    def contains_folded(self, word: str) -> bool:
        return word in self._counts or word.casefold() in self._fold_counts

    def count(self, word: str) -> int:
        return self._counts.get(word, 0)

    def count_folded(self, word: str) -> int:
        """Total count across all casings of `word`."""
        return self._fold_counts.get(word.casefold(), 0)

    def relative_frequency(self, word: str) -> float:
        return self._counts.get(word, 0) / self._max_count

    def relative_frequency_folded(self, word: str) -> float:
        """Case-insensitive relative frequency in [0, 1].

        Candidate scoring uses this so that a case-restored candidate
        (e.g. a sentence-initial capitalization of a lower-case lexicon
        word) is credited with the word's real frequency.
        """
        return self._fold_counts.get(word.casefold(), 0) / self._max_fold_count

    def items(self):
        return self._counts.items()


def load_lexicon(path: str | Path) -> Lexicon:
    """Load `word<TAB>count` TSV; `#` comments allowed, duplicates summed."""
    path = Path(path)
    counts: dict[str, int] = {}
    with open(path, encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.rstrip("\n")
            if line.startswith("#"):
                continue
            fields = line.split("\t")
            if len(fields) != 2:
                raise ParseError(
                    f"expected 2 tab-separated fields, got {len(fields)}",
                    path=str(path),
                    line=lineno,
                )
            word, count_text = fields
            try:
                count = int(count_text)
            except ValueError:
                raise ParseError(
                    f"count is not an integer: {count_text!r}", path=str(path), line=lineno
                ) from None
            if not word or count < 1:
                raise ParseError("empty form or non-positive count", path=str(path), line=lineno)
            counts[word] = counts.get(word, 0) + count
    if not counts:
        raise ParseError("lexicon file contains no entries", path=str(path))
    return Lexicon(counts)


@dataclass(frozen=True)
class Candidate:
    """One correction candidate with its route and route-local score."""

    form: str
    source: str  # variant_index | edit0 | edit1 | edit2 | ngram
    score: float
    distance: int | None = None


def _ngrams(word: str, n: int) -> list[str]:
    padded = _PAD_START * (n - 1) + word + _PAD_END * (n - 1)
    return [padded[i : i + n] for i in range(len(padded) - n + 1)]


class NgramIndex:
    """Character n-gram tf-idf profiles with an inverted index for scoring.

    idf uses the smoothed form log((1+N)/(1+df)) + 1, which keeps every
    weight positive, so a word's cosine with itself is exactly 1.
    """

    def __init__(self, lexicon: Lexicon, n: int = 3):
        if n < 1:
            raise ValueError("n-gram size must be >= 1")
        self.n = n
        self._lexicon = lexicon
        words = sorted(lexicon)
        df: dict[str, int] = {}
        profiles: list[dict[str, int]] = []
        for word in words:
            tf: dict[str, int] = {}
            for gram in _ngrams(word, n):
                tf[gram] = tf.get(gram, 0) + 1
            profiles.append(tf)
            for gram in tf:
                df[gram] = df.get(gram, 0) + 1
        total = len(words)
        self._idf = {
            gram: math.log((1 + total) / (1 + count)) + 1.0 for gram, count in df.items()
        }
        self._words = words
        self._norms: list[float] = []
        self._postings: dict[str, list[tuple[int, float]]] = {}
        for word_id, tf in enumerate(profiles):
            sq = 0.0
            for gram, count in tf.items():
                weight = count * self._idf[gram]
                sq += weight * weight
                self._postings.setdefault(gram, []).append((word_id, weight))
            self._norms.append(math.sqrt(sq))

    def vector(self, word: str) -> dict[str, float]:
        """tf-idf profile of an arbitrary word, using the index vocabulary."""
        vec: dict[str, float] = {}
        for gram in _ngrams(word, self.n):
            idf = self._idf.get(gram)
            if idf is not None:
                vec[gram] = vec.get(gram, 0.0) + idf
        return vec

    def similarity(self, a: str, b: str) -> float:
        """Cosine between two words' profiles under the index weights."""
        va, vb = self.vector(a), self.vector(b)
        dot = sum(weight * vb.get(gram, 0.0) for gram, weight in va.items())
        na = math.sqrt(sum(w * w for w in va.values()))
        nb = math.sqrt(sum(w * w for w in vb.values()))
        if na == 0.0 or nb == 0.0:
            return 0.0
        return dot / (na * nb)

    def rank(self, token: str, k: int) -> list[tuple[str, float]]:
        """Top-k positive-similarity lexicon words for `token`.

        Ties break by lexicon frequency descending, then lexicographically.
        """
        if k <= 0:
            return []
        query = self.vector(token)
        qnorm = math.sqrt(sum(w * w for w in query.values()))
        if qnorm == 0.0:
            return []
        dots: dict[int, float] = {}
        for gram, weight in query.items():
            for word_id, posting_weight in self._postings.get(gram, ()):
                dots[word_id] = dots.get(word_id, 0.0) + weight * posting_weight
        scored = [
            (self._words[word_id], dot / (qnorm * self._norms[word_id]))
            for word_id, dot in dots.items()
            if dot > 0.0
        ]
        scored.sort(key=lambda item: (-item[1], -self._lexicon.count(item[0]), item[0]))
        return scored[:k]


def ngram_candidates(token: str, index: NgramIndex, k: int) -> list[Candidate]:
    """Top-k fuzzy matches by character-n-gram cosine."""
    return [
        Candidate(form=word, source="ngram", score=sim)
        for word, sim in index.rank(token, k)
    ]


def _iter_edits1(word: str, alphabet: str = LUX_ALPHABET):
    splits = [(word[:i], word[i:]) for i in range(len(word) + 1)]
    for left, right in splits:
        if right:
            yield left + right[1:]  # delete
        if len(right) > 1:
            yield left + right[1] + right[0] + right[2:]  # transpose
        for ch in alphabet:
            if right:
                yield left + ch + right[1:]  # replace
            yield left + ch + right  # insert


def _deletes_up_to_two(word: str) -> set[str]:
    ones = {word[:i] + word[i + 1:] for i in range(len(word))}
    twos = {v[:i] + v[i + 1:] for v in ones for i in range(len(v))}
    return {word} | ones | twos


_ALPHABET_SET = frozenset(LUX_ALPHABET)


def edit_candidates(token: str, lexicon: Lexicon, max_distance: int = 2) -> list[Candidate]:
    """All lexicon words reachable by <= max_distance single-character edits.

    Single edits are deletions, insertions, substitutions over the
    Luxembourgish alphabet, and adjacent transpositions. Each word is
    reported at its smallest distance; closer candidates score higher
    (1 / (1 + distance)).

    Distance 2 is found with a deletion-neighborhood shortlist instead of
    enumerating the two-edit neighborhood (which is quadratic in alphabet
    size); shortlisted words are then verified by forward edit generation.
    """
    if not token:
        raise ValueError("cannot generate candidates for an empty token")
    if max_distance not in (1, 2):
        raise ValueError("max_distance must be 1 or 2")
    found: dict[str, int] = {}
    if token in lexicon:
        found[token] = 0
    edits1 = set(_iter_edits1(token))
    for form in edits1:
        if form in lexicon and form not in found:
            found[form] = 1
    if max_distance == 2:
        if _ALPHABET_SET.issuperset(token):
            # On alphabet-only strings the single-edit relation is
            # symmetric, so w is two edits from the token iff their
            # one-edit neighborhoods intersect. Words using characters
            # outside the alphabet cannot be produced by these edits.
            index = lexicon.deletes_index()
            shortlist: set[str] = set()
            for variant in _deletes_up_to_two(token):
                shortlist.update(index.get(variant, ()))
            for form in sorted(shortlist):
                if form in found or not _ALPHABET_SET.issuperset(form):
                    continue
                if any(edit in edits1 for edit in _iter_edits1(form)):
                    found[form] = 2
        else:
            for intermediate in edits1:
                for form in _iter_edits1(intermediate):
                    if form in lexicon and form not in found:
                        found[form] = 2
    return [
        Candidate(form=form, source=f"edit{distance}", score=1.0 / (1 + distance), distance=distance)
        for form, distance in sorted(found.items(), key=lambda item: (item[1], item[0]))
    ]


@dataclass(frozen=True)
class PipelineConfig:
    """Scoring weights and candidate-generation settings.

    weights are (variant, edit, ngram, frequency); ranker_weight is a
    reserved slot for a future context-sensitive ranker and is unused.
    """

    weights: tuple[float, float, float, float] = (0.4, 0.2, 0.2, 0.2)
    max_edit_distance: int = 2
    ngram_n: int = 3
    topk: int = 10
    ranker_weight: float = 0.0

    def __post_init__(self) -> None:
        if len(self.weights) != 4 or any(w < 0 for w in self.weights):
            raise ValueError("weights must be four non-negative numbers")


class Pipeline:
    """Token-local normalizer over a reverse variant index and a lexicon."""

    def __init__(
        self,
        reverse_index: ReverseIndex,
        lexicon: Lexicon,
        config: PipelineConfig | None = None,
        ngram_index: NgramIndex | None = None,
    ):
        self.config = config or PipelineConfig()
        self.reverse_index = reverse_index
        self.lexicon = lexicon
        self.ngram_index = ngram_index or NgramIndex(lexicon, self.config.ngram_n)
        self._token_cache: dict[str, str] = {}

    def _variant_candidates(self, token: str) -> list[Candidate]:
        entries = self.reverse_index.lookup(token)
        restore_case = False
        if not entries:
            entries = self.reverse_index.lookup_folded(token)
            restore_case = True
        if not entries:
            return []
        total = sum(count for _, count in entries)
        candidates = []
        for lemma, count in entries:
            form = apply_case_pattern(token, lemma) if restore_case else lemma
            candidates.append(
                Candidate(form=form, source="variant_index", score=count / total)
            )
        return candidates

    def candidates(self, token: str) -> list[Candidate]:
        """The pooled candidate list for one unknown token."""
        pool = self._variant_candidates(token)
        pool.extend(edit_candidates(token, self.lexicon, self.config.max_edit_distance))
        pool.extend(ngram_candidates(token, self.ngram_index, self.config.topk))
        return pool

    def normalize_token(self, token: str) -> str:
        """Best correction for `token`, or the token itself.

        Lexicon members (exact or case-folded) are left as-is. Otherwise
        the candidate pool is scored with
        w_v*variant_prob + w_e*edit_proximity + w_n*ngram_cosine + w_f*rel_freq
        and ties break by lexicon frequency, then edit distance, then form.
        """
        cached = self._token_cache.get(token)
        if cached is not None:
            return cached
        result = self._normalize_token(token)
        self._token_cache[token] = result
        return result

    def _normalize_token(self, token: str) -> str:
        if self.lexicon.contains_folded(token):
            return token
        merged: dict[str, list[float]] = {}
        distances: dict[str, int] = {}
        for candidate in self.candidates(token):
            components = merged.setdefault(candidate.form, [0.0, 0.0, 0.0, 0.0])
            if candidate.source == "variant_index":
                components[0] = max(components[0], candidate.score)
            elif candidate.source.startswith("edit"):
                components[1] = max(components[1], candidate.score)
                distances[candidate.form] = candidate.distance
            else:
                components[2] = max(components[2], candidate.score)
            components[3] = self.lexicon.relative_frequency_folded(candidate.form)
        if not merged:
            return token
        wv, we, wn, wf = self.config.weights

        def sort_key(form: str):
            components = merged[form]
            combined = (
                wv * components[0] + we * components[1] + wn * components[2] + wf * components[3]
            )
            return (
                -combined,
                -self.lexicon.count_folded(form),
                distances.get(form, self.config.max_edit_distance + 1),
                form,
            )

        return min(merged, key=sort_key)

    def normalize_sentence(self, sentence: str) -> str:
        """Normalize token by token; punctuation and clitics are preserved."""
        output: list[str] = []
        for token in tokenize(sentence):
            if is_punctuation(token):
                output.append(token)
                continue
            prefix, core = split_clitic(token)
            if not core:
                output.append(token)
                continue
            output.append(prefix + self.normalize_token(core))
        return detokenize(output)

    def normalize_lines(self, lines: Sequence[str], workers: int = 1) -> list[str]:
        """Normalize a batch of sentences, optionally across processes."""
        if workers <= 1:
            return [self.normalize_sentence(line) for line in lines]
        job = partial(_normalize_one, self)
        chunksize = max(1, len(lines) // (workers * 4))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(job, lines, chunksize=chunksize))


def _normalize_one(pipeline: Pipeline, line: str) -> str:
    return pipeline.normalize_sentence(line)


def run_external_normalizer(command: str | Sequence[str], sentences: Sequence[str]) -> list[str]:
    """Run an external normalizer over a batch via the line protocol.

    Writes one sentence per line (UTF-8, LF) to the child's stdin and
    expects exactly one output line per input line, in order.
    """
    if not sentences:
        return []
    argv = shlex.split(command) if isinstance(command, str) else list(command)
    try:
        completed = subprocess.run(
            argv,
            input="\n".join(sentences) + "\n",
            capture_output=True,
            text=True,
            encoding="utf-8",
        )
    except OSError as exc:
        raise ProtocolError(f"failed to launch normalizer {argv!r}: {exc}") from exc
    if completed.returncode != 0:
        stderr = completed.stderr.strip()
        raise ProtocolError(
            f"normalizer {argv!r} exited with status {completed.returncode}"
            + (f": {stderr}" if stderr else "")
        )
    lines = completed.stdout.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if len(lines) != len(sentences):
        raise ProtocolError(
            f"normalizer wrote {len(lines)} lines for {len(sentences)} inputs"
        )
    return lines


def read_predictions(path: str | Path, expected: int) -> list[str]:
    """Load precomputed predictions, one sentence per line."""
    lines = Path(path).read_text(encoding="utf-8").split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if len(lines) != expected:
        raise ProtocolError(
            f"predictions file {path} has {len(lines)} lines, expected {expected}"
        )
    return lines
