"""Candidate spelling-variant mining from dictionary-definition dumps.

A definition like ``[Demoscene] spelling of "Sucks".`` under the headword
``suxx`` yields the candidate pair (suxx, sucks). The template: the word
"spelling", a run free of periods and commas, a space, then a quoted or
bracketed single word. Candidates then pass a cascade that drops
non-ASCII headwords, definitions containing the word "name", and
headwords too rare in an informal-corpus frequency table.

Extraction is deterministic; the pipeline orders its output by entry id
so parallel execution cannot reorder the pairs file.
"""

from __future__ import annotations

import enum
import json
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Mapping

from ._fileio import text_reader, text_writer
from .errors import ParseError
from .vocab import FrequencyTable

SPELLING_MARKER = "spelling"

# One alternative per delimiter kind instead of a backreference closer, so
# that bracketed cross-reference links ("[fark]") close with "]".
_CANDIDATE_RE = re.compile(
    r"spelling[^.,]* (?:'(?P<single>\w+)'|\"(?P<double>\w+)\"|\[(?P<bracket>\w+)\])"
)

# Typographic quotes appear in web-scraped text; fold them before matching.
_QUOTE_FOLD = str.maketrans({"\u2018": "'", "\u2019": "'", "\u201c": '"', "\u201d": '"'})

_NAME_RE = re.compile(r"\bname\b")

_WORD_RE = re.compile(r"\w+\Z")


class Delimiter(enum.Enum):
    SINGLE_QUOTE = "single_quote"
    DOUBLE_QUOTE = "double_quote"
    BRACKET = "bracket"


class Validation(enum.Enum):
    UNVALIDATED = "unvalidated"
    CONFIRMED = "confirmed"
    REJECTED_NAME = "rejected_name"
    REJECTED_OTHER = "rejected_other"


@dataclass(frozen=True)
class DefinitionEntry:
    """One dictionary record: an id, the headword, and the definition."""

    entry_id: str
    headword: str
    definition_text: str

    def __post_init__(self):
        if not self.definition_text:
            raise ValueError(f"entry {self.entry_id!r} has an empty definition")


@dataclass
class VariantPair:
    """An (informal, formal) candidate with provenance and review status."""

    informal: str
    formal: str
    entry_id: str
    delimiter: Delimiter
    validation: Validation = Validation.UNVALIDATED

    def __post_init__(self):
        if self.informal.lower() == self.formal.lower():
            raise ValueError(
                f"degenerate pair: {self.informal!r} equals its variant"
            )
        if not _WORD_RE.match(self.formal):
            raise ValueError(f"formal token is not a single word: {self.formal!r}")


@dataclass
class ExtractionStats:
    """Tallies for one extraction run.

    ``definitions_scanned`` and ``spelling_hits`` describe the scan stage
    and are filled by the pipeline, not by ``apply_filters`` alone.
    """

    definitions_scanned: int = 0
    spelling_hits: int = 0
    candidates_extracted: int = 0
    excluded_name: int = 0
    excluded_frequency: int = 0
    excluded_nonascii: int = 0

    def as_text(self) -> str:
        return "".join(f"{k}: {v}\n" for k, v in asdict(self).items())

    def as_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True) + "\n"


def find_spelling_definitions(
    entries: Iterable[DefinitionEntry],
) -> Iterator[DefinitionEntry]:
    """Yield entries whose definition contains "spelling", case-folded."""
    for entry in entries:
        if SPELLING_MARKER in entry.definition_text.lower():
            yield entry


def extract_candidate(entry: DefinitionEntry) -> VariantPair | None:
    """Apply the template to one definition; first match wins.

    Headword and variant are folded to lowercase. Returns None when the
    template does not match or the match points back at the headword.
    """
    text = entry.definition_text.translate(_QUOTE_FOLD)
    m = _CANDIDATE_RE.search(text)
    if m is None:
        return None
    if m.group("single") is not None:
        variant, delimiter = m.group("single"), Delimiter.SINGLE_QUOTE
    elif m.group("double") is not None:
        variant, delimiter = m.group("double"), Delimiter.DOUBLE_QUOTE
    else:
        variant, delimiter = m.group("bracket"), Delimiter.BRACKET
    informal = entry.headword.lower()
    formal = variant.lower()
    if informal == formal:
        return None
    return VariantPair(
        informal=informal,
        formal=formal,
        entry_id=entry.entry_id,
        delimiter=delimiter,
    )


def apply_filters(
    pairs: list[VariantPair],
    entries_by_id: Mapping[str, DefinitionEntry],
    freq: FrequencyTable,
    min_freq: int,
    *,
    definitions_scanned: int = 0,
    spelling_hits: int = 0,
) -> tuple[list[VariantPair], ExtractionStats]:
    """Run the exclusion cascade over extracted candidates.

    Checks per pair, first failure claims it: non-ASCII headword, source
    definition containing the word "name" (marks the pair rejected_name),
    headword frequency below ``min_freq``. Raises LookupError when a
    pair's entry id is not resolvable.
    """
    if min_freq < 1:
        raise ValueError(f"min_freq must be positive, got {min_freq}")
    stats = ExtractionStats(
        definitions_scanned=definitions_scanned,
        spelling_hits=spelling_hits,
        candidates_extracted=len(pairs),
    )
    kept: list[VariantPair] = []
    for pair in pairs:
        entry = entries_by_id.get(pair.entry_id)
        if entry is None:
            raise LookupError(f"unresolvable entry id: {pair.entry_id!r}")
        if not pair.informal.isascii():
            stats.excluded_nonascii += 1
        elif _NAME_RE.search(entry.definition_text.lower()):
            pair.validation = Validation.REJECTED_NAME
            stats.excluded_name += 1
        elif freq[pair.informal] < min_freq:
            stats.excluded_frequency += 1
        else:
            kept.append(pair)
    return kept, stats


def mine_pairs(
    entries: Iterable[DefinitionEntry],
    freq: FrequencyTable,
    min_freq: int,
    threads: int | None = None,
) -> tuple[list[VariantPair], ExtractionStats]:
    """Full pipeline: scan, extract, order by entry id, filter.

    ``threads`` > 1 extracts candidates in a thread pool; the entry-id
    ordering makes the output identical either way.
    """
    entries = list(entries)
    by_id: dict[str, DefinitionEntry] = {}
    for entry in entries:
        if entry.entry_id in by_id:
            raise ValueError(f"duplicate entry id in dump: {entry.entry_id!r}")
        by_id[entry.entry_id] = entry
    hits = list(find_spelling_definitions(entries))
    if threads is not None and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            extracted = list(pool.map(extract_candidate, hits))
    else:
        extracted = [extract_candidate(e) for e in hits]
    candidates = sorted(
        (p for p in extracted if p is not None), key=lambda p: p.entry_id
    )
    return apply_filters(
        candidates,
        by_id,
        freq,
        min_freq,
        definitions_scanned=len(entries),
        spelling_hits=len(hits),
    )


# --- file formats ---------------------------------------------------------
#
# definitions dump: entry_id TAB headword TAB definition_text, one record
# per line. Newlines in the definition are escaped as \n; tabs and
# backslashes are escaped too so a record is always exactly three fields.
#
# pairs file: informal TAB formal TAB entry_id TAB delimiter TAB validation.

_UNESCAPE_RE = re.compile(r"\\(.)")
_UNESCAPE_MAP = {"n": "\n", "t": "\t", "\\": "\\"}


def _escape(text: str) -> str:
    return (
        text.replace("\\", "\\\\").replace("\t", "\\t").replace("\n", "\\n")
    )


def _unescape(text: str) -> str:
    return _UNESCAPE_RE.sub(
        lambda m: _UNESCAPE_MAP.get(m.group(1), "\\" + m.group(1)), text
    )


def read_definitions(source) -> list[DefinitionEntry]:
    """Read a definitions dump. An empty file is an empty dump."""
    entries: list[DefinitionEntry] = []
    seen: set[str] = set()
    with text_reader(source) as stream:
        for lineno, line in enumerate(stream, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            fields = line.split("\t")
            if len(fields) != 3:
                raise ParseError(
                    f"expected 3 tab-separated fields, found {len(fields)}",
                    line=lineno,
                )
            entry_id, headword, definition = fields
            if entry_id in seen:
                raise ParseError(f"duplicate entry id {entry_id!r}", line=lineno)
            if not definition:
                raise ParseError(f"empty definition for {entry_id!r}", line=lineno)
            seen.add(entry_id)
            entries.append(
                DefinitionEntry(
                    entry_id=entry_id,
                    headword=headword,
                    definition_text=_unescape(definition),
                )
            )
    return entries


def write_definitions(entries: Iterable[DefinitionEntry], sink) -> None:
    with text_writer(sink) as stream:
        for e in entries:
            stream.write(
                f"{e.entry_id}\t{e.headword}\t{_escape(e.definition_text)}\n"
            )


def write_pairs(pairs: Iterable[VariantPair], sink) -> None:
    with text_writer(sink) as stream:
        for p in pairs:
            stream.write(
                f"{p.informal}\t{p.formal}\t{p.entry_id}"
                f"\t{p.delimiter.value}\t{p.validation.value}\n"
            )


def read_pairs(source) -> list[VariantPair]:
    pairs: list[VariantPair] = []
    with text_reader(source) as stream:
        for lineno, line in enumerate(stream, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            fields = line.split("\t")
            if len(fields) != 5:
                raise ParseError(
                    f"expected 5 tab-separated fields, found {len(fields)}",
                    line=lineno,
                )
            informal, formal, entry_id, delimiter, validation = fields
            try:
                pairs.append(
                    VariantPair(
                        informal=informal,
                        formal=formal,
                        entry_id=entry_id,
                        delimiter=Delimiter(delimiter),
                        validation=Validation(validation),
                    )
                )
            except ValueError as exc:
                raise ParseError(str(exc), line=lineno) from None
    return pairs
