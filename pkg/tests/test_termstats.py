"""Term-score oracles: tf normalization, tf.idf, G2, and co-occurrence."""

import math
import random
from collections import Counter
from types import SimpleNamespace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sumrules.corpus import CorpusStats, build_corpus_stats
from sumrules.termstats import (
    CooccurrenceTable,
    SynonymLexicon,
    build_cooccurrence_table,
    cohesion_link_counts,
    g2_score,
    idf,
    tf_idf_weight,
    tf_norm,
    title_term_mentions,
)
from tests.conftest import make_doc


def stats_for(doc_counts: dict[str, Counter], df: dict[str, int], n_docs: int) -> CorpusStats:
    """Hand-assembled stats; corpus counts derived from the per-doc counters."""
    corpus_counts: Counter = Counter()
    for counts in doc_counts.values():
        corpus_counts.update(counts)
    return CorpusStats(
        n_docs=n_docs,
        df=df,
        doc_token_totals={d: sum(c.values()) for d, c in doc_counts.items()},
        corpus_token_total=sum(sum(c.values()) for c in doc_counts.values()),
        term_corpus_counts=dict(corpus_counts),
        doc_term_counts=doc_counts,
        doc_max_counts={d: max(c.values()) if c else 0 for d, c in doc_counts.items()},
    )


# ---------------------------------------------------------------------------
# tf / idf / tf.idf


def test_tf_norm_examples():
    doc = SimpleNamespace(id="d")
    stats = stats_for({"d": Counter({"a": 6, "b": 3, "c": 1})}, {"a": 1, "b": 1, "c": 1}, 1)
    assert tf_norm("a", doc, stats) == 1.0  # most frequent term
    assert tf_norm("b", doc, stats) == 0.5  # count 3, max 6
    assert tf_norm("zz", doc, stats) == 0.0  # absent


def test_tf_idf_hand_example():
    # tf_norm = 0.5, n = 100, df = 1 -> 0.5 * (ln 100 + 1)
    doc = SimpleNamespace(id="d")
    stats = stats_for({"d": Counter({"a": 6, "b": 3})}, {"a": 100, "b": 1}, 100)
    assert tf_idf_weight("b", doc, stats) == pytest.approx(0.5 * (math.log(100) + 1), rel=1e-12)
    assert 0.5 * (math.log(100) + 1) == pytest.approx(2.80259, abs=5e-6)


def test_tf_idf_most_frequent_everywhere_is_one():
    # max-frequency term present in all n docs: 1 * (ln n - ln n + 1) = 1
    doc = SimpleNamespace(id="d")
    stats = stats_for({"d": Counter({"a": 4})}, {"a": 7}, 7)
    assert tf_idf_weight("a", doc, stats) == pytest.approx(1.0, rel=1e-12)


def test_tf_idf_absent_or_unseen_is_zero():
    doc = SimpleNamespace(id="d")
    stats = stats_for({"d": Counter({"a": 2})}, {"a": 1}, 3)
    assert tf_idf_weight("nope", doc, stats) == 0.0
    assert idf("nope", stats) == 0.0


def test_tf_idf_against_brute_force_oracle():
    rng = random.Random(12345)
    doc = SimpleNamespace(id="d")
    for _ in range(1000):
        n_docs = rng.randint(1, 500)
        count = rng.randint(0, 30)
        max_count = max(count, rng.randint(1, 30))
        df = rng.randint(0 if count == 0 else 1, n_docs)
        counts = Counter({"t": count, "pad": max_count})
        stats = stats_for({"d": counts}, {"t": df, "pad": n_docs}, n_docs)
        got = tf_idf_weight("t", doc, stats)
        # Oracle: direct evaluation of (count/max) * (ln n - ln df + 1).
        expected = 0.0 if df == 0 else (count / max_count) * (math.log(n_docs) - math.log(df) + 1.0)
        assert got == pytest.approx(expected, rel=1e-9, abs=1e-12)


@given(
    count=st.integers(0, 50),
    extra=st.integers(0, 50),
    df=st.integers(1, 100),
    n_extra=st.integers(0, 100),
)
@settings(max_examples=200, deadline=None)
def test_tf_norm_bounded(count, extra, df, n_extra):
    doc = SimpleNamespace(id="d")
    max_count = count + extra if count + extra > 0 else 1
    stats = stats_for({"d": Counter({"t": count, "pad": max_count})}, {"t": df}, df + n_extra)
    assert 0.0 <= tf_norm("t", doc, stats) <= 1.0


# ---------------------------------------------------------------------------
# G2


def g2_oracle(k_doc: int, doc_total: int, k_corpus: int, n: int) -> float:
    """Brute-force 2x2 log-likelihood ratio, one-sided."""
    if doc_total == 0 or n == 0:
        return 0.0
    if k_doc / doc_total <= k_corpus / n:
        return 0.0
    table = [
        [k_doc, k_corpus - k_doc],
        [doc_total - k_doc, (n - doc_total) - (k_corpus - k_doc)],
    ]
    cols = [doc_total, n - doc_total]
    rows = [k_corpus, n - k_corpus]
    g = 0.0
    for i in (0, 1):
        for j in (0, 1):
            obs = table[i][j]
            if obs > 0:
                g += obs * math.log(obs / (rows[i] * cols[j] / n))
    return 2.0 * g


def g2_stats(k_doc: int, doc_total: int, k_corpus: int, n: int) -> CorpusStats:
    rest_counts = Counter({"t": k_corpus - k_doc, "pad": (n - doc_total) - (k_corpus - k_doc)})
    return stats_for(
        {
            "d": Counter({"t": k_doc, "pad": doc_total - k_doc}),
            "rest": rest_counts,
        },
        {"t": 2, "pad": 2},
        2,
    )


def test_g2_hand_example_matches_oracle():
    # 100-token doc with 10 occurrences vs a 10,000-token corpus with 20 total.
    doc = SimpleNamespace(id="d")
    stats = g2_stats(10, 100, 20, 10_000)
    got = g2_score("t", doc, stats)
    expected = g2_oracle(10, 100, 20, 10_000)
    assert got == pytest.approx(expected, rel=1e-9)
    assert got > 0.0


def test_g2_clamps_when_rate_not_above_corpus():
    doc = SimpleNamespace(id="d")
    # In-document rate equals the corpus rate -> exactly 0.
    stats = g2_stats(1, 100, 100, 10_000)
    assert g2_score("t", doc, stats) == 0.0
    # Below the corpus rate -> also 0.
    stats = g2_stats(1, 200, 100, 10_000)
    assert g2_score("t", doc, stats) == 0.0


def test_g2_against_oracle_randomized():
    rng = random.Random(777)
    doc = SimpleNamespace(id="d")
    for _ in range(1000):
        doc_total = rng.randint(1, 300)
        k_doc = rng.randint(0, doc_total)
        n = doc_total + rng.randint(1, 5000)
        k_corpus = k_doc + rng.randint(0, n - doc_total)
        stats = g2_stats(k_doc, doc_total, k_corpus, n)
        got = g2_score("t", doc, stats)
        expected = g2_oracle(k_doc, doc_total, k_corpus, n)
        assert got == pytest.approx(expected, rel=1e-9, abs=1e-12)
        assert got >= 0.0


# ---------------------------------------------------------------------------
# Co-occurrence


def words_doc(doc_id: str, words: list[str]) -> dict:
    return {
        "id": doc_id,
        "title": "t",
        "sections": [{"heading": "h", "kind": "other", "paragraphs": [[" ".join(words) + "."]]}],
    }


def test_mutinfo_value_and_strict_thresholds(stoplist):
    # Stream "a0 b0 f0 a0 b0 f1 ..." with window 1: only (a0, b0) repeats.
    words = []
    for i in range(12):
        words.extend(["aza", "bzb", f"fil{i}"])
    doc = make_doc(words_doc("d", words), stoplist)

    # 12 adjacent pairs; pair_count > 10 holds, so the entry survives a
    # permissive score threshold and carries the ln(N*pair/(tf_a*tf_b)) score.
    table = build_cooccurrence_table([doc], window=1, min_count=10, min_score=-100.0)
    entry = table.lookup("aza", "bzb")
    assert entry is not None
    count, score = entry
    assert count == 12
    total = 36
    assert score == pytest.approx(math.log(total * 12 / (12 * 12)), rel=1e-12)

    # Strictness: a pair with count == min_count must not be stored.
    table = build_cooccurrence_table([doc], window=1, min_count=12, min_score=-100.0)
    assert table.lookup("aza", "bzb") is None

    # Strictness: score == min_score must not be stored either.
    exact = math.log(total * 12 / (12 * 12))
    table = build_cooccurrence_table([doc], window=1, min_count=10, min_score=exact)
    assert table.lookup("aza", "bzb") is None


def test_mutinfo_hand_arithmetic():
    # ln(1000 * 20 / (50 * 40)) = ln 10
    assert math.log(1000 * 20 / (50 * 40)) == pytest.approx(math.log(10), rel=1e-12)
    assert math.log(10) == pytest.approx(2.30259, abs=5e-6)


def test_cooccurrence_never_crosses_documents(stoplist):
    d1 = make_doc(words_doc("d1", ["aza"] * 20), stoplist)
    d2 = make_doc(words_doc("d2", ["bzb"] * 20), stoplist)
    table = build_cooccurrence_table([d1, d2], window=40, min_count=0, min_score=-100.0)
    assert table.lookup("aza", "bzb") is None


def test_cooccurrence_window_against_brute_force(stoplist):
    rng = random.Random(31)
    vocab = [f"w{i}" for i in range(6)]
    docs = []
    streams = []
    for d in range(3):
        words = [rng.choice(vocab) for _ in range(60)]
        docs.append(make_doc(words_doc(f"d{d}", words), stoplist))
        streams.append(words)
    window = 5
    table = build_cooccurrence_table(docs, window=window, min_count=0, min_score=-100.0)
    # Oracle: re-count every within-window unordered pair from the raw streams.
    expected: Counter = Counter()
    total = 0
    term_counts: Counter = Counter()
    for stream in streams:
        total += len(stream)
        term_counts.update(stream)
        for i, a in enumerate(stream):
            for b in stream[i + 1 : i + 1 + window]:
                if a != b:
                    expected[tuple(sorted((a, b)))] += 1
    assert set(table.entries) == set(expected)
    for pair, count in expected.items():
        got_count, got_score = table.entries[pair]
        assert got_count == count
        want = math.log(total * count / (term_counts[pair[0]] * term_counts[pair[1]]))
        assert got_score == pytest.approx(want, rel=1e-9)


def test_cooccurrence_table_round_trip(tmp_path):
    table = CooccurrenceTable(
        {("aa", "bb"): (11, 10.5), ("cc", "dd"): (42, 12.25)}, window=40, min_count=10, min_score=10.0
    )
    path = tmp_path / "cooc.tsv"
    table.save(path)
    loaded = CooccurrenceTable.load(path)
    assert loaded.entries == table.entries
    assert (loaded.window, loaded.min_count, loaded.min_score) == (40, 10, 10.0)
    assert ("bb", "aa") in loaded  # key order is normalized


# ---------------------------------------------------------------------------
# Synonym lexicon and sentence-level links


def test_synonym_lexicon_linking(tmp_path):
    path = tmp_path / "syn.txt"
    path.write_text("# comment\ncar auto automobile\nbig large\n", "utf-8")
    lex = SynonymLexicon.load(path)
    assert lex.linked("car", "automobile")
    assert lex.linked("big", "large")
    assert not lex.linked("car", "large")
    assert not lex.linked("car", "unknown")
    assert not SynonymLexicon.empty().linked("car", "auto")


def test_cohesion_links_count_sentences_not_pairs(stoplist):
    obj = {
        "id": "d",
        "title": "t",
        "sections": [
            {
                "heading": "h",
                "kind": "other",
                "paragraphs": [
                    [
                        "Cars move people around cities.",
                        "An automobile moves one automobile owner.",
                        "Nothing relevant happens here.",
                    ]
                ],
            }
        ],
    }
    doc = make_doc(obj, stoplist)
    lex = SynonymLexicon.from_synsets([{"cars", "automobile"}])
    table = CooccurrenceTable()
    s0, s1, s2 = doc.sentences()
    assert cohesion_link_counts(s0, doc, table, lex) == (1, 0)  # links to s1 once
    assert cohesion_link_counts(s1, doc, table, lex) == (1, 0)  # no self-link
    assert cohesion_link_counts(s2, doc, table, lex) == (0, 0)


def test_title_term_mentions_counts_tokens_in_sentence(stoplist):
    obj = {
        "id": "d",
        "title": "Parsing handbook",
        "sections": [
            {
                "heading": "Parsing basics",
                "kind": "other",
                "paragraphs": [
                    [
                        "Parsing tools require parsing skills.",
                        "Unrelated words appear here.",
                    ]
                ],
            }
        ],
    }
    doc = make_doc(obj, stoplist)
    s0, s1 = doc.sentences()
    # 'parsing' is in both the title and a heading but each sentence token
    # is counted once; it occurs twice in s0.
    assert title_term_mentions(s0, doc, stoplist) == 2
    assert title_term_mentions(s1, doc, stoplist) == 0
