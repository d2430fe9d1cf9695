"""Formal lexicon and corpus frequency tables.

The lexicon is the list of tokens counted as standard-dialect vocabulary;
neighbor ranking is restricted to it. The frequency table is an occurrence
count over an informal corpus sample, used to drop rare headwords during
pair extraction.

Membership tests fold both sides to lowercase, so the stored token sets
are folded up front. The corpus tokenization used for lexicon building
(lowercase, whitespace split, outer punctuation stripped, internal
apostrophes and hyphens kept) is recorded in evaluation report headers
since it is a toolkit choice, not an input property.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Iterable, Iterator

from ._fileio import text_reader, text_writer
from .errors import ParseError

if TYPE_CHECKING:
    from .extract import VariantPair

log = logging.getLogger(__name__)

TOKENIZATION_NOTE = (
    "lowercased, whitespace-split, outer non-alphanumerics stripped"
)


@dataclass(frozen=True)
class FormalLexicon:
    """A set of lowercase tokens deemed formal, with a provenance label."""

    tokens: frozenset[str]
    source_label: str = ""
    duplicates: int = 0

    def __contains__(self, token: str) -> bool:
        return token.lower() in self.tokens

    def __len__(self) -> int:
        return len(self.tokens)


@dataclass(frozen=True)
class FrequencyTable:
    """Exact token counts from a corpus sample.

    ``total_tokens`` is the stream length, which may exceed the sum of
    stored counts when a table was loaded from a file that floored rare
    tokens away.
    """

    counts: dict[str, int] = field(default_factory=dict)
    total_tokens: int = 0

    def __getitem__(self, token: str) -> int:
        return self.counts.get(token, 0)

    def __len__(self) -> int:
        return len(self.counts)


def tokenize(text: str) -> Iterator[str]:
    """Corpus tokenization for lexicon building and frequency counting."""
    for raw in text.lower().split():
        start, end = 0, len(raw)
        while start < end and not raw[start].isalnum():
            start += 1
        while end > start and not raw[end - 1].isalnum():
            end -= 1
        if start < end:
            yield raw[start:end]


def build_lexicon(
    corpus: Iterable[str], min_count: int = 1, source_label: str = ""
) -> FormalLexicon:
    """Collect every token occurring at least ``min_count`` times.

    ``corpus`` is a pre-tokenized stream. Tokens are folded to lowercase
    before counting. Raises ValueError on an empty corpus.
    """
    if min_count < 1:
        raise ValueError(f"min_count must be positive, got {min_count}")
    counts = Counter(token.lower() for token in corpus)
    if not counts:
        raise ValueError("empty corpus")
    kept = frozenset(t for t, c in counts.items() if c >= min_count)
    return FormalLexicon(tokens=kept, source_label=source_label)


def load_lexicon(source, source_label: str | None = None) -> FormalLexicon:
    """Read a one-token-per-line lexicon file.

    Tokens are folded to lowercase; duplicates (post-fold) are collapsed
    and tallied. Raises ParseError if the file holds no tokens.
    """
    with text_reader(source) as stream:
        if source_label is None:
            source_label = getattr(stream, "name", "")
        tokens: set[str] = set()
        duplicates = 0
        for line in stream:
            token = line.strip().lower()
            if not token:
                continue
            if token in tokens:
                duplicates += 1
            else:
                tokens.add(token)
    if not tokens:
        raise ParseError("empty lexicon file")
    if duplicates:
        log.warning("collapsed %d duplicate lexicon tokens", duplicates)
    return FormalLexicon(
        tokens=frozenset(tokens), source_label=source_label, duplicates=duplicates
    )


def write_lexicon(lexicon: FormalLexicon, sink) -> None:
    """Write one token per line, sorted for reproducibility."""
    with text_writer(sink) as stream:
        for token in sorted(lexicon.tokens):
            stream.write(token + "\n")


def count_frequencies(corpus: Iterable[str]) -> FrequencyTable:
    """Exact per-token counts; total_tokens is the stream length."""
    counts = Counter()
    total = 0
    for token in corpus:
        counts[token] += 1
        total += 1
    return FrequencyTable(counts=dict(counts), total_tokens=total)


def load_frequencies(source) -> FrequencyTable:
    """Read a ``token TAB count`` file; counts must be positive integers."""
    counts: dict[str, int] = {}
    with text_reader(source) as stream:
        for lineno, line in enumerate(stream, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            fields = line.split("\t")
            if len(fields) != 2:
                raise ParseError(
                    f"expected 'token<TAB>count', got {line!r}", line=lineno
                )
            try:
                count = int(fields[1])
            except ValueError:
                raise ParseError(
                    f"non-integer count {fields[1]!r}", line=lineno
                ) from None
            if count < 1:
                raise ParseError(f"count must be >= 1, got {count}", line=lineno)
            counts[fields[0]] = count
    return FrequencyTable(counts=counts, total_tokens=sum(counts.values()))


def write_frequencies(table: FrequencyTable, sink) -> None:
    """Write ``token TAB count`` lines, most frequent first."""
    with text_writer(sink) as stream:
        for token, count in sorted(table.counts.items(), key=lambda kv: (-kv[1], kv[0])):
            stream.write(f"{token}\t{count}\n")


def filter_pairs_by_lexicon(
    pairs: list["VariantPair"], lexicon: FormalLexicon
) -> tuple[list["VariantPair"], list["VariantPair"]]:
    """Partition pairs on whether the formal token is in the lexicon.

    Returns (retained, removed) with input order preserved in both lists.
    """
    retained, removed = [], []
    for pair in pairs:
        (retained if pair.formal in lexicon else removed).append(pair)
    return retained, removed
