import io

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import lexicon_of, pair
from spellvar.errors import ParseError
from spellvar.vocab import (
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


class TestTokenize:
    def test_lowercase_and_split(self):
        assert list(tokenize("The Cat sat")) == ["the", "cat", "sat"]

    def test_outer_punctuation_stripped(self):
        assert list(tokenize("Hello, world!")) == ["hello", "world"]

    def test_inner_punctuation_kept(self):
        assert list(tokenize("don't re-do")) == ["don't", "re-do"]

    def test_pure_punctuation_dropped(self):
        assert list(tokenize("a -- b ???")) == ["a", "b"]

    def test_empty(self):
        assert list(tokenize("")) == []
        assert list(tokenize("   \t\n ")) == []


class TestBuildLexicon:
    def test_min_count_threshold(self):
        # token stream "the cat the": threshold 2 keeps only "the"
        lex = build_lexicon(["the", "cat", "the"], min_count=2)
        assert lex.tokens == frozenset({"the"})

    def test_inclusive_floor(self):
        lex = build_lexicon(["the", "cat", "the"], min_count=1)
        assert lex.tokens == frozenset({"the", "cat"})

    def test_min_count_one_gives_distinct_tokens(self):
        tokens = ["b", "a", "b", "c", "a"]
        lex = build_lexicon(tokens, min_count=1)
        assert lex.tokens == frozenset(tokens)

    def test_folds_case(self):
        lex = build_lexicon(["Two", "two"], min_count=2)
        assert lex.tokens == frozenset({"two"})

    def test_source_label_recorded(self):
        lex = build_lexicon(["a"], source_label="toy")
        assert lex.source_label == "toy"

    def test_empty_corpus_rejected(self):
        with pytest.raises(ValueError):
            build_lexicon([])

    def test_bad_min_count_rejected(self):
        with pytest.raises(ValueError):
            build_lexicon(["a"], min_count=0)

    @given(
        st.lists(st.text(alphabet="abc", min_size=1, max_size=3), min_size=1, max_size=20),
        st.integers(1, 5),
    )
    @settings(max_examples=100)
    def test_raising_min_count_shrinks_lexicon(self, tokens, min_count):
        lo = build_lexicon(tokens, min_count=min_count)
        hi = build_lexicon(tokens, min_count=min_count + 1)
        assert hi.tokens <= lo.tokens


class TestLexiconIO:
    def test_membership_folds_probe(self):
        lex = lexicon_of("sucks", "receive")
        assert "sucks" in lex
        assert "SUCKS" in lex
        assert "Receive" in lex
        assert "nope" not in lex

    def test_load_folds_and_dedups(self):
        lex = load_lexicon(b"Sucks\nsucks\nreceive\n")
        assert lex.tokens == frozenset({"sucks", "receive"})
        assert lex.duplicates == 1

    def test_load_skips_blank_lines(self):
        lex = load_lexicon(b"a\n\nb\n")
        assert lex.tokens == frozenset({"a", "b"})

    def test_load_empty_rejected(self):
        with pytest.raises(ParseError, match="empty"):
            load_lexicon(b"")
        with pytest.raises(ParseError, match="empty"):
            load_lexicon(b"\n\n")

    def test_write_sorted(self):
        sink = io.BytesIO()
        write_lexicon(lexicon_of("zebra", "apple", "mango"), sink)
        assert sink.getvalue() == b"apple\nmango\nzebra\n"

    def test_round_trip(self):
        lex = lexicon_of("gamma", "alpha", "beta")
        sink = io.BytesIO()
        write_lexicon(lex, sink)
        again = load_lexicon(sink.getvalue())
        assert again.tokens == lex.tokens


class TestFrequencies:
    def test_count_basic(self):
        freq = count_frequencies(["a", "a", "b"])
        assert freq.counts == {"a": 2, "b": 1}
        assert freq.total_tokens == 3

    def test_empty_stream(self):
        freq = count_frequencies([])
        assert freq.counts == {}
        assert freq.total_tokens == 0

    def test_missing_token_is_zero(self):
        freq = count_frequencies(["a"])
        assert freq["zzz"] == 0

    @given(st.lists(st.text(alphabet="xy", min_size=1, max_size=3), max_size=25), st.randoms())
    @settings(max_examples=100)
    def test_stream_order_irrelevant(self, tokens, rnd):
        shuffled = list(tokens)
        rnd.shuffle(shuffled)
        a = count_frequencies(tokens)
        b = count_frequencies(shuffled)
        assert a.counts == b.counts
        assert a.total_tokens == b.total_tokens

    def test_write_orders_by_count_then_token(self):
        freq = FrequencyTable(counts={"b": 2, "a": 2, "c": 9}, total_tokens=13)
        sink = io.BytesIO()
        write_frequencies(freq, sink)
        assert sink.getvalue() == b"c\t9\na\t2\nb\t2\n"

    def test_load_round_trip(self):
        freq = count_frequencies(["one two two three three three"])
        sink = io.BytesIO()
        write_frequencies(freq, sink)
        again = load_frequencies(sink.getvalue())
        assert again.counts == freq.counts
        assert again.total_tokens == freq.total_tokens

    def test_load_rejects_bad_field_count(self):
        with pytest.raises(ParseError, match="line 1"):
            load_frequencies(b"solo\n")

    def test_load_rejects_non_integer(self):
        with pytest.raises(ParseError, match="line 2"):
            load_frequencies(b"a\t1\nb\tmany\n")

    def test_load_rejects_nonpositive(self):
        with pytest.raises(ParseError, match="line 1"):
            load_frequencies(b"a\t0\n")
        with pytest.raises(ParseError, match="line 1"):
            load_frequencies(b"a\t-3\n")

    def test_load_empty_gives_empty_table(self):
        freq = load_frequencies(b"")
        assert freq.total_tokens == 0
        assert freq["anything"] == 0


class TestFilterByLexicon:
    def test_partition(self):
        lex = lexicon_of("sucks", "your")
        pairs = [pair("suxx", "sucks"), pair("braj", "brah"), pair("ur", "your")]
        kept, removed = filter_pairs_by_lexicon(pairs, lex)
        assert [p.formal for p in kept] == ["sucks", "your"]
        assert [p.formal for p in removed] == ["brah"]

    def test_order_preserved(self):
        lex = lexicon_of("b", "d")
        pairs = [pair("p1", "d"), pair("p2", "b"), pair("p3", "d")]
        kept, _ = filter_pairs_by_lexicon(pairs, lex)
        assert [p.formal for p in kept] == ["d", "b", "d"]

    def test_idempotent(self):
        lex = lexicon_of("sucks")
        pairs = [pair("suxx", "sucks"), pair("braj", "brah")]
        kept, _ = filter_pairs_by_lexicon(pairs, lex)
        again, removed = filter_pairs_by_lexicon(kept, lex)
        assert again == kept
        assert removed == []

    @given(
        st.lists(
            st.tuples(
                st.text(alphabet="ab", min_size=1, max_size=3),
                st.text(alphabet="cd", min_size=1, max_size=3),
            ),
            max_size=12,
        ),
        st.sets(st.text(alphabet="cd", min_size=1, max_size=3), max_size=6),
    )
    @settings(max_examples=100)
    def test_partition_property(self, raw_pairs, lex_tokens):
        pairs = [pair(f"{inf}{i}", formal, entry_id=f"e{i}") for i, (inf, formal) in enumerate(raw_pairs)]
        lex = FormalLexicon(tokens=frozenset(lex_tokens))
        kept, removed = filter_pairs_by_lexicon(pairs, lex)
        assert len(kept) + len(removed) == len(pairs)
        assert all(p.formal in lex for p in kept)
        assert all(p.formal not in lex for p in removed)
        # the partition interleaves back into the original sequence
        ki, ri = iter(kept), iter(removed)
        rebuilt = [next(ki) if p.formal in lex else next(ri) for p in pairs]
        assert rebuilt == pairs
