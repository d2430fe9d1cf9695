"""Rank-based scoring of embeddings on informal/formal variant pairs.

For each (informal, formal) pair the candidate pool is the intersection
of the formal lexicon with the embedding vocabulary (zero vectors left
out). Candidates are ordered by cosine similarity to the informal token,
ties broken by ascending token order, and the pair scores the 1-based
rank of its formal target in that full ordering. accuracy@k is the share
of scored pairs whose target landed in the top k.

Restricting the pool to the lexicon is what keeps the metric stable when
the embedding vocabulary grows by more informal tokens: additions outside
the lexicon cannot enter any ranking.

``rank_formal_neighbors`` is the production path (batched dot products);
``brute_force_rank`` recomputes the same ordering pairwise with no
batching and serves as its equivalence oracle in the tests.
"""

from __future__ import annotations

import enum
from bisect import bisect_left
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from ._fileio import text_reader, text_writer
from .embeddings import EmbeddingTable, cosine
from .errors import DegenerateVectorError, MissingTokenError, ParseError
from .extract import VariantPair
from .vocab import TOKENIZATION_NOTE, FormalLexicon

DEFAULT_CUTOFFS = (1, 5, 10, 20)


@dataclass(frozen=True)
class EvalConfig:
    """Evaluation knobs.

    ``k`` bounds the neighbor list recorded per pair; ``cutoffs`` are the
    accuracy@c thresholds reported. The tie-break rule is fixed:
    descending similarity, then ascending token order.
    """

    k: int = 20
    cutoffs: tuple[int, ...] = DEFAULT_CUTOFFS
    exclude_self: bool = True

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if not self.cutoffs:
            raise ValueError("cutoffs must be non-empty")
        if any(c < 1 for c in self.cutoffs) or any(
            a >= b for a, b in zip(self.cutoffs, self.cutoffs[1:])
        ):
            raise ValueError(
                f"cutoffs must be strictly increasing positive integers: {self.cutoffs}"
            )


class PairStatus(enum.Enum):
    SCORED = "scored"
    INFORMAL_MISSING = "informal_missing"
    FORMAL_MISSING = "formal_missing"


@dataclass
class PairResult:
    pair: VariantPair
    status: PairStatus
    rank: int | None = None
    top_neighbors: list[tuple[str, float]] = field(default_factory=list)


@dataclass
class EvalReport:
    per_pair: list[PairResult]
    scored_count: int
    missing_informal: int
    missing_formal: int
    accuracy_at: dict[int, float]
    config: EvalConfig
    lexicon_label: str = ""
    embedding_label: str = ""
    candidate_count: int = 0
    metadata: dict[str, str] = field(default_factory=dict)
    no_scored_pairs: bool = False


class _Ranker:
    """Shared candidate pool and batched cosine scores for one table."""

    def __init__(self, table: EmbeddingTable, lexicon: FormalLexicon):
        self.table = table
        pool = sorted(
            (token, i)
            for i, token in enumerate(table.vocabulary)
            if token in lexicon and not table.degenerate[i]
        )
        self.tokens: list[str] = [t for t, _ in pool]
        rows = np.fromiter((i for _, i in pool), dtype=np.intp, count=len(pool))
        self.candidates = table.matrix[rows].astype(np.float64)
        self.norms = np.linalg.norm(self.candidates, axis=1)

    def __len__(self) -> int:
        return len(self.tokens)

    def position(self, token: str) -> int | None:
        p = bisect_left(self.tokens, token)
        if p < len(self.tokens) and self.tokens[p] == token:
            return p
        return None

    def ordering(
        self, informal: str, exclude_self: bool
    ) -> tuple[list[str], np.ndarray, np.ndarray]:
        """Candidate tokens, similarities, and the tie-broken ordering.

        The returned ``order`` indexes tokens/scores from best to worst.
        Candidates are held in ascending token order, so a stable sort on
        descending similarity realizes the tie-break exactly.
        """
        i = self.table.index.get(informal)
        if i is None:
            raise MissingTokenError(informal)
        if self.table.degenerate[i]:
            raise DegenerateVectorError(
                f"informal token {informal!r} has a zero vector"
            )
        tokens = self.tokens
        candidates = self.candidates
        norms = self.norms
        if exclude_self:
            p = self.position(informal)
            if p is not None:
                tokens = tokens[:p] + tokens[p + 1 :]
                candidates = np.delete(candidates, p, axis=0)
                norms = np.delete(norms, p)
        if not tokens:
            raise ValueError("empty candidate set")
        query = self.table.matrix[i].astype(np.float64)
        scores = (candidates @ query) / (norms * np.linalg.norm(query))
        scores = np.clip(scores, -1.0, 1.0)
        order = np.argsort(-scores, kind="stable")
        return tokens, scores, order


def rank_formal_neighbors(
    table: EmbeddingTable,
    informal: str,
    lexicon: FormalLexicon,
    k: int,
    exclude_self: bool = True,
) -> list[tuple[str, float]]:
    """The k most similar lexicon tokens to ``informal``, best first.

    Fewer than k entries come back only when the candidate pool is
    smaller. Raises MissingTokenError / DegenerateVectorError for an
    unusable informal token and ValueError for an empty pool.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    tokens, scores, order = _Ranker(table, lexicon).ordering(informal, exclude_self)
    return [(tokens[j], float(scores[j])) for j in order[:k]]


def brute_force_rank(
    table: EmbeddingTable,
    informal: str,
    lexicon: FormalLexicon,
    exclude_self: bool = True,
) -> list[tuple[str, float]]:
    """Oracle twin of rank_formal_neighbors: full ranking, one cosine at
    a time, no batching, no shared state."""
    if informal not in table.index:
        raise MissingTokenError(informal)
    query = table.matrix[table.index[informal]]
    if table.degenerate[table.index[informal]]:
        raise DegenerateVectorError(f"informal token {informal!r} has a zero vector")
    scored = []
    for i, token in enumerate(table.vocabulary):
        if token not in lexicon or table.degenerate[i]:
            continue
        if exclude_self and token == informal:
            continue
        scored.append((token, cosine(query, table.matrix[i])))
    if not scored:
        raise ValueError("empty candidate set")
    return sorted(scored, key=lambda ts: (-ts[1], ts[0]))


def evaluate_pairs(
    table: EmbeddingTable,
    pairs: list[VariantPair],
    lexicon: FormalLexicon,
    config: EvalConfig,
    threads: int | None = None,
    lexicon_label: str = "",
    embedding_label: str = "",
) -> EvalReport:
    """Score every pair and aggregate accuracy@c for the config cutoffs.

    Pair statuses: informal_missing when the informal token is absent
    from the vocabulary (or has a zero vector), formal_missing when the
    target is outside lexicon-and-vocabulary, else scored with the
    target's rank in the full restricted ordering. Only scored pairs
    enter the accuracy denominator.
    """
    if not table.normalized:
        raise ValueError("evaluate_pairs requires a normalized table")
    ranker = _Ranker(table, lexicon)

    def score_one(pair: VariantPair) -> PairResult:
        i = table.index.get(pair.informal)
        if i is None or table.degenerate[i]:
            return PairResult(pair, PairStatus.INFORMAL_MISSING)
        j = table.index.get(pair.formal)
        if j is None or table.degenerate[j] or pair.formal not in lexicon:
            return PairResult(pair, PairStatus.FORMAL_MISSING)
        tokens, scores, order = ranker.ordering(pair.informal, config.exclude_self)
        inverse = np.empty(len(order), dtype=np.intp)
        inverse[order] = np.arange(len(order))
        p = bisect_left(tokens, pair.formal)  # present: formal survived exclusion
        rank = int(inverse[p]) + 1
        top = [(tokens[q], float(scores[q])) for q in order[: config.k]]
        return PairResult(pair, PairStatus.SCORED, rank=rank, top_neighbors=top)

    if threads is not None and threads > 1 and pairs:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(score_one, pairs))
    else:
        results = [score_one(p) for p in pairs]

    scored = [r for r in results if r.status is PairStatus.SCORED]
    missing_informal = sum(r.status is PairStatus.INFORMAL_MISSING for r in results)
    missing_formal = sum(r.status is PairStatus.FORMAL_MISSING for r in results)
    accuracy_at: dict[int, float] = {}
    if scored:
        for c in config.cutoffs:
            accuracy_at[c] = sum(r.rank <= c for r in scored) / len(scored)
    return EvalReport(
        per_pair=results,
        scored_count=len(scored),
        missing_informal=missing_informal,
        missing_formal=missing_formal,
        accuracy_at=accuracy_at,
        config=config,
        lexicon_label=lexicon_label,
        embedding_label=embedding_label,
        candidate_count=len(ranker),
        metadata={
            "lexicon_folding": "lowercase",
            "corpus_tokenization": TOKENIZATION_NOTE,
        },
        no_scored_pairs=not scored,
    )


def diagnostics(report: EvalReport, n_worst: int) -> str:
    """The worst-ranked scored pairs, each with its nearest formal tokens.

    Pairs are listed by descending rank; ties keep input order.
    """
    rows = [
        ReportRow(r.pair.informal, r.pair.formal, r.status, r.rank, r.top_neighbors)
        for r in report.per_pair
    ]
    return diagnostics_rows(rows, n_worst)


def diagnostics_rows(rows: list["ReportRow"], n_worst: int) -> str:
    """Row-level form of ``diagnostics``, usable on a reloaded report."""
    if n_worst < 1:
        raise ValueError(f"n_worst must be >= 1, got {n_worst}")
    scored = [(i, r) for i, r in enumerate(rows) if r.status is PairStatus.SCORED]
    scored.sort(key=lambda ir: (-ir[1].rank, ir[0]))
    lines = ["worst pairs by target rank:"]
    for _, r in scored[:n_worst]:
        near = ", ".join(f"{t}:{s:.6f}" for t, s in r.top_neighbors[:5])
        lines.append(
            f"  rank {r.rank:>6d}  {r.informal} -> {r.formal}  nearest: {near}"
        )
    if not scored:
        lines.append("  (no scored pairs)")
    return "\n".join(lines) + "\n"


# --- report serialization -------------------------------------------------


def accuracy_summary(
    accuracy_at: dict[int, float], scored_count: int, precision: int = 3
) -> list[str]:
    """``accuracy@c = 0.xxx (n/m)`` lines, one per cutoff."""
    lines = []
    for c in sorted(accuracy_at):
        hits = round(accuracy_at[c] * scored_count)
        lines.append(
            f"accuracy@{c} = {accuracy_at[c]:.{precision}f} ({hits}/{scored_count})"
        )
    return lines


def _result_row(r: PairResult) -> str:
    rank = "-" if r.rank is None else str(r.rank)
    neighbors = ",".join(f"{t}:{s:.6f}" for t, s in r.top_neighbors)
    return f"{r.pair.informal}\t{r.pair.formal}\t{r.status.value}\t{rank}\t{neighbors}"


def render_report_text(report: EvalReport) -> str:
    """Human-oriented report: key:value header then a per-pair table."""
    cfg = report.config
    lines = [
        "spelling-variant evaluation report",
        f"k: {cfg.k}",
        f"cutoffs: {','.join(str(c) for c in cfg.cutoffs)}",
        f"exclude_self: {str(cfg.exclude_self).lower()}",
        f"lexicon: {report.lexicon_label}",
        f"embeddings: {report.embedding_label}",
    ]
    lines += [f"{key}: {value}" for key, value in report.metadata.items()]
    lines += [
        f"formal_candidates: {report.candidate_count}",
        f"pairs: {len(report.per_pair)}",
        f"scored: {report.scored_count}",
        f"missing_informal: {report.missing_informal}",
        f"missing_formal: {report.missing_formal}",
    ]
    if report.no_scored_pairs:
        lines.append("warning: no scored pairs, accuracy undefined")
    for c in sorted(report.accuracy_at):
        hits = round(report.accuracy_at[c] * report.scored_count)
        lines.append(
            f"accuracy@{c}: {report.accuracy_at[c]:.6f} ({hits}/{report.scored_count})"
        )
    lines.append("")
    lines.append("informal\tformal\tstatus\trank\ttop_neighbors")
    lines += [_result_row(r) for r in report.per_pair]
    return "\n".join(lines) + "\n"


def render_report_tsv(report: EvalReport) -> str:
    """Machine form: informal TAB formal TAB status TAB rank TAB neighbors."""
    return "".join(_result_row(r) + "\n" for r in report.per_pair)


def write_report(report: EvalReport, text_sink, tsv_sink) -> None:
    with text_writer(text_sink) as stream:
        stream.write(render_report_text(report))
    with text_writer(tsv_sink) as stream:
        stream.write(render_report_tsv(report))


@dataclass
class ReportRow:
    """One parsed line of the machine-readable report."""

    informal: str
    formal: str
    status: PairStatus
    rank: int | None
    top_neighbors: list[tuple[str, float]]


def load_report_rows(source) -> list[ReportRow]:
    """Parse the machine-readable report back into rows."""
    rows: list[ReportRow] = []
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
            informal, formal, status_text, rank_text, neighbor_text = fields
            try:
                status = PairStatus(status_text)
            except ValueError:
                raise ParseError(
                    f"unknown status {status_text!r}", line=lineno
                ) from None
            if rank_text == "-":
                rank = None
            else:
                try:
                    rank = int(rank_text)
                except ValueError:
                    raise ParseError(
                        f"non-integer rank {rank_text!r}", line=lineno
                    ) from None
                if rank < 1:
                    raise ParseError(f"rank must be >= 1, got {rank}", line=lineno)
            if (rank is None) == (status is PairStatus.SCORED):
                raise ParseError(
                    "rank must be present exactly for scored rows", line=lineno
                )
            neighbors: list[tuple[str, float]] = []
            if neighbor_text:
                for item in neighbor_text.split(","):
                    token, _, sim_text = item.rpartition(":")
                    try:
                        neighbors.append((token, float(sim_text)))
                    except ValueError:
                        raise ParseError(
                            f"malformed neighbor {item!r}", line=lineno
                        ) from None
            rows.append(ReportRow(informal, formal, status, rank, neighbors))
    return rows


def summarize_rows(
    rows: Iterable[ReportRow], cutoffs: Iterable[int]
) -> tuple[int, dict[int, float]]:
    """Recompute (scored_count, accuracy_at) from saved report rows."""
    ranks = [r.rank for r in rows if r.status is PairStatus.SCORED]
    if not ranks:
        return 0, {}
    return len(ranks), {
        c: sum(rank <= c for rank in ranks) / len(ranks) for c in cutoffs
    }
