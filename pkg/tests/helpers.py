"""Shared builders for the test suite."""

import math

import numpy as np

from spellvar.embeddings import EmbeddingTable
from spellvar.extract import Delimiter, VariantPair
from spellvar.vocab import FormalLexicon


def make_table(vectors: dict[str, list[float]], normalized: bool = False) -> EmbeddingTable:
    """Build a table from a token -> vector mapping, in insertion order."""
    tokens = tuple(vectors)
    matrix = np.array([vectors[t] for t in tokens], dtype=np.float32)
    return EmbeddingTable(
        dimension=matrix.shape[1],
        vocabulary=tokens,
        matrix=matrix,
        normalized=normalized,
    )


def random_table(rng, n_tokens: int, dimension: int, prefix: str = "t") -> EmbeddingTable:
    matrix = rng.normal(size=(n_tokens, dimension)).astype(np.float32)
    tokens = tuple(f"{prefix}{i:04d}" for i in range(n_tokens))
    return EmbeddingTable(dimension=dimension, vocabulary=tokens, matrix=matrix)


def lexicon_of(*tokens: str) -> FormalLexicon:
    return FormalLexicon(tokens=frozenset(t.lower() for t in tokens))


def pair(informal: str, formal: str, entry_id: str = "e0") -> VariantPair:
    return VariantPair(
        informal=informal,
        formal=formal,
        entry_id=entry_id,
        delimiter=Delimiter.DOUBLE_QUOTE,
    )


def forced_rank_setup(target_ranks: list[int], n_candidates: int):
    """Vectors engineered so pair i's formal target lands at target_ranks[i].

    Informal tokens are one-hot axes; each formal candidate carries one
    similarity slot per informal axis plus a ballast component that pads
    its norm to 1. Slot values step down by 0.01 per rank position, so
    orderings are unambiguous at float32 precision.

    Returns (vectors, pairs) where vectors maps token -> list[float] and
    pairs is [(informal_token, formal_token), ...].
    """
    n_queries = len(target_ranks)
    assert all(1 <= r <= n_candidates for r in target_ranks)
    dim = n_queries + 1
    formal_tokens = [f"w{j:03d}" for j in range(n_candidates)]
    # distinct targets, one per query
    targets = [formal_tokens[j] for j in range(n_queries)]
    slots = np.zeros((n_candidates, n_queries))
    for qi, rank in enumerate(target_ranks):
        order = [qi] + [j for j in range(n_candidates) if j != qi]
        # move the target from the front to its forced position
        order.remove(qi)
        order.insert(rank - 1, qi)
        for position, j in enumerate(order, start=1):
            slots[j, qi] = 0.5 - 0.01 * (position - 1)
    vectors = {}
    for i in range(n_queries):
        one_hot = [0.0] * dim
        one_hot[i] = 1.0
        vectors[f"inf{i}"] = one_hot
    for j, token in enumerate(formal_tokens):
        ballast = math.sqrt(max(0.0, 1.0 - float(np.sum(slots[j] ** 2))))
        vectors[token] = list(slots[j]) + [ballast]
    pairs = [(f"inf{i}", targets[i]) for i in range(n_queries)]
    return vectors, pairs
