"""Shared wiring: prepared corpus resources and per-document labeled vectors."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .corpus import CorpusStats, Document, build_corpus_stats
from .errors import ConfigError, LabelingError
from .features import FeatureVector, extract_features
from .labeling import label_document
from .termstats import (
    DEFAULT_COOC_MIN_COUNT,
    DEFAULT_COOC_MIN_SCORE,
    DEFAULT_COOC_WINDOW,
    CooccurrenceTable,
    SynonymLexicon,
    build_cooccurrence_table,
)
from .userfocus import (
    DEFAULT_DECAY,
    DEFAULT_ITERATIONS,
    DEFAULT_TOP_K_PER_DOC,
    DEFAULT_TOPIC_SIGMA,
    KeywordMap,
    Topic,
    build_topic_centroid,
    spread_activation,
)

log = logging.getLogger("sumrules")


@dataclass
class Resources:
    """Read-only corpus-level structures shared by every stage."""

    stoplist: set[str]
    stats: CorpusStats
    table: CooccurrenceTable
    lex: SynonymLexicon
    docs_by_id: dict[str, Document] = field(default_factory=dict)
    # Memo for labeled-vector collections; extraction is pure so this is safe.
    vector_cache: dict[tuple, dict] = field(default_factory=dict, repr=False)


def prepare_resources(
    docs: list[Document],
    stoplist: set[str],
    lex: SynonymLexicon | None = None,
    window: int = DEFAULT_COOC_WINDOW,
    min_count: int = DEFAULT_COOC_MIN_COUNT,
    min_score: float = DEFAULT_COOC_MIN_SCORE,
    table: CooccurrenceTable | None = None,
) -> Resources:
    stats = build_corpus_stats(docs)
    if table is None:
        table = build_cooccurrence_table(docs, window, min_count, min_score)
    return Resources(
        stoplist=stoplist,
        stats=stats,
        table=table,
        lex=lex if lex is not None else SynonymLexicon.empty(),
        docs_by_id={d.id: d for d in docs},
    )


def build_user_topic(
    res: Resources,
    interest_ids: list[str],
    top_k_per_doc: int = DEFAULT_TOP_K_PER_DOC,
    threshold_sigma: float = DEFAULT_TOPIC_SIGMA,
) -> Topic:
    missing = [i for i in interest_ids if i not in res.docs_by_id]
    if missing:
        raise ConfigError(f"interest documents not in corpus: {missing}")
    interest_docs = [res.docs_by_id[i] for i in interest_ids]
    return build_topic_centroid(interest_docs, res.stats, top_k_per_doc, threshold_sigma)


def build_keyword_maps(
    res: Resources,
    topic: Topic,
    decay: float = DEFAULT_DECAY,
    iterations: int = DEFAULT_ITERATIONS,
) -> dict[str, KeywordMap]:
    return {
        doc_id: spread_activation(topic, doc, res.table, res.lex, decay, iterations)
        for doc_id, doc in res.docs_by_id.items()
    }


def labeled_vectors_generic(
    doc: Document,
    res: Resources,
    compression: float,
) -> list[FeatureVector] | None:
    """Feature vectors labeled by abstract similarity; None when un-labelable."""
    try:
        labels = label_document(doc, compression, res.stats)
    except LabelingError as exc:
        log.warning("skipping document %s: %s", doc.id, exc)
        return None
    vectors = extract_features(doc, res.stats, res.table, res.lex, compression, res.stoplist)
    for v, lab in zip(vectors, labels):
        v.label = lab
    return vectors


def labeled_vectors_user(
    doc: Document,
    res: Resources,
    keywords: KeywordMap,
    compression: float,
) -> list[FeatureVector]:
    """Feature vectors with keyword features, labeled by activation weight."""
    from .userfocus import generate_user_focused_labels

    labels = generate_user_focused_labels(doc, keywords, compression)
    vectors = extract_features(
        doc, res.stats, res.table, res.lex, compression, res.stoplist, keywords=keywords.weights
    )
    for v, lab in zip(vectors, labels):
        v.label = lab
    return vectors
