"""Discourse dictionaries, polarity lexicon and rule-based counting."""

from __future__ import annotations

import os
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from ._csvio import write_csv
from .errors import ConfigError, DataError
from .ingest import TweetRecord, canonical_form, canonical_token, is_bare_punctuation, tokenize

__all__ = [
    "NONE_LABEL",
    "Lexicon",
    "PolarityLexicon",
    "Tonality",
    "load_lexicon",
    "load_polarity",
    "classify_tokens",
    "classify_post",
    "label_from_counts",
    "polarity_score",
    "word_frequencies",
    "write_frequencies",
]

NONE_LABEL = "none"


@dataclass(frozen=True)
class Lexicon:
    name: str
    entries: frozenset

    def __post_init__(self):
        if not self.entries:
            raise DataError(f"lexicon {self.name!r} is empty")

    def __contains__(self, token: str) -> bool:
        return token in self.entries

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class PolarityLexicon:
    positive: frozenset
    negative: frozenset

    def __post_init__(self):
        both = self.positive & self.negative
        if both:
            sample = ", ".join(sorted(both)[:5])
            raise DataError(f"tokens listed as both positive and negative: {sample}")


@dataclass(frozen=True)
class Tonality:
    positive_count: int
    negative_count: int
    neutral_count: int

    @property
    def label(self) -> str:
        if self.positive_count > self.negative_count:
            return "positive"
        if self.negative_count > self.positive_count:
            return "negative"
        return "neutral"


def _entry_lines(path) -> Iterable[tuple[int, str]]:
    if not os.path.isfile(path):
        raise ConfigError(f"lexicon file not found: {path}")
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("%"):
                continue
            yield lineno, line


def _canonical_entry(raw: str, path, lineno: int) -> str:
    entry = canonical_form(raw)
    if not entry or any(ch.isspace() for ch in entry):
        raise DataError(f"{path}:{lineno}: entry must be a single token: {raw!r}")
    return entry


def load_lexicon(path, name: str) -> Lexicon:
    """Read a one-token-per-line lexicon.

    Blank lines and lines starting with ``%`` are ignored. Entries are put in
    the same canonical form the counters use for tokens, so ``#stay_home`` in
    the file matches the hashtag ``#stay_home`` in a post.
    """
    entries = frozenset(_canonical_entry(raw, path, n) for n, raw in _entry_lines(path))
    if not entries:
        raise DataError(f"lexicon {name!r} at {path} has no entries")
    return Lexicon(name, entries)


def load_polarity(path) -> PolarityLexicon:
    """Read a ``token<TAB>pos|neg`` file."""
    pos, neg = set(), set()
    for lineno, line in _entry_lines(path):
        parts = line.split("\t")
        if len(parts) != 2 or parts[1].strip() not in ("pos", "neg"):
            raise DataError(f"{path}:{lineno}: expected 'token<TAB>pos|neg'")
        entry = _canonical_entry(parts[0], path, lineno)
        (pos if parts[1].strip() == "pos" else neg).add(entry)
    return PolarityLexicon(frozenset(pos), frozenset(neg))


def classify_tokens(tokens: Iterable[str], lexicons: Sequence[Lexicon]) -> dict[str, int]:
    """Count token occurrences found in each lexicon.

    A token listed in several lexicons increments each of them.
    """
    counts = {lex.name: 0 for lex in lexicons}
    for tok in tokens:
        form = canonical_token(tok)
        for lex in lexicons:
            if form in lex.entries:
                counts[lex.name] += 1
    return counts


def label_from_counts(counts: dict[str, int]) -> str:
    """Name of the strictly largest count; ``"none"`` on zero or a tie."""
    best, best_n, tied = NONE_LABEL, 0, False
    for name, n in counts.items():
        if n > best_n:
            best, best_n, tied = name, n, False
        elif n == best_n and n > 0:
            tied = True
    return NONE_LABEL if tied else best


def classify_post(record: TweetRecord, lexicons: Sequence[Lexicon]) -> str:
    return label_from_counts(classify_tokens(tokenize(record.text), lexicons))


def polarity_score(tokens: Iterable[str], polarity: PolarityLexicon) -> Tonality:
    pos = neg = total = 0
    for tok in tokens:
        form = canonical_token(tok)
        total += 1
        if form in polarity.positive:
            pos += 1
        elif form in polarity.negative:
            neg += 1
    return Tonality(pos, neg, total - pos - neg)


def word_frequencies(records: Iterable[TweetRecord], stopwords=frozenset()) -> list[tuple[str, int]]:
    """Token counts over all records, most frequent first.

    Tokens are counted in canonical form; stop-words and tokens made only of
    punctuation or symbols are skipped. Ties sort by code point order.
    """
    stop = stopwords.entries if isinstance(stopwords, Lexicon) else stopwords
    counter: Counter = Counter()
    for rec in records:
        for tok in tokenize(rec.text):
            form = canonical_token(tok)
            if not form or form in stop or is_bare_punctuation(form):
                continue
            counter[form] += 1
    return sorted(counter.items(), key=lambda kv: (-kv[1], kv[0]))


def write_frequencies(path, freqs: Iterable[tuple[str, int]]) -> int:
    return write_csv(path, ["token", "count"], freqs)
