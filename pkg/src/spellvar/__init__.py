"""Spelling-variant mining and embedding evaluation toolkit.

Mines (informal, formal) spelling-variant pairs from dictionary-definition
dumps, then scores word embeddings by how highly each informal token ranks
its formal counterpart among formal-lexicon neighbors (accuracy@k).
"""

from .embeddings import (
    EmbeddingTable,
    cosine,
    load_embeddings,
    normalize,
    vector_of,
    write_embeddings,
)
from .errors import (
    DegenerateVectorError,
    MissingTokenError,
    ParseError,
    SpellvarError,
)
from .evaluate import (
    EvalConfig,
    EvalReport,
    PairResult,
    PairStatus,
    brute_force_rank,
    diagnostics,
    evaluate_pairs,
    rank_formal_neighbors,
)
from .extract import (
    DefinitionEntry,
    Delimiter,
    ExtractionStats,
    Validation,
    VariantPair,
    apply_filters,
    extract_candidate,
    find_spelling_definitions,
    mine_pairs,
    read_definitions,
    read_pairs,
    write_definitions,
    write_pairs,
)
from .vocab import (
    FormalLexicon,
    FrequencyTable,
    build_lexicon,
    count_frequencies,
    filter_pairs_by_lexicon,
    load_frequencies,
    load_lexicon,
    tokenize,
    write_frequencies,
    write_lexicon,
)

__version__ = "0.1.0"
