"""User-interest topics, spreading activation, and user-focused labels."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

from .corpus import CorpusStats, Document
from .errors import TopicError, ValidationError
from .features import top_fraction_count
from .termstats import CooccurrenceTable, SynonymLexicon, g2_score

DEFAULT_TOPIC_SIGMA = 2.5
DEFAULT_TOP_K_PER_DOC = 50
DEFAULT_DECAY = 0.9
DEFAULT_ITERATIONS = 2


@dataclass
class Topic:
    words: dict[str, float]
    threshold_sigma: float
    source_doc_ids: list[str]

    def save(self, path: str | Path) -> None:
        lines = [f"{w}\t{s!r}" for w, s in sorted(self.words.items(), key=lambda kv: (-kv[1], kv[0]))]
        Path(path).write_text("\n".join(lines) + "\n", "utf-8")

    @classmethod
    def load(cls, path: str | Path, threshold_sigma: float = DEFAULT_TOPIC_SIGMA) -> "Topic":
        words = {}
        for line in Path(path).read_text("utf-8").splitlines():
            if not line.strip():
                continue
            w, s = line.split("\t")
            words[w] = float(s)
        return cls(words, threshold_sigma, [])


@dataclass
class KeywordMap:
    doc_id: str
    weights: dict[str, float] = field(default_factory=dict)

    def save(self, path: str | Path) -> None:
        lines = [f"{w}\t{a!r}" for w, a in sorted(self.weights.items(), key=lambda kv: (-kv[1], kv[0]))]
        Path(path).write_text("\n".join(lines) + "\n", "utf-8")


def build_topic_centroid(
    interest_docs: list[Document],
    stats: CorpusStats,
    top_k_per_doc: int = DEFAULT_TOP_K_PER_DOC,
    threshold_sigma: float = DEFAULT_TOPIC_SIGMA,
) -> Topic:
    """Centroid of the interest documents' top content words by G2 score.

    Scores of words shared between documents are averaged; only words more
    than threshold_sigma population standard deviations above the pooled
    mean survive.
    """
    if not interest_docs:
        raise TopicError("no interest documents supplied")
    pooled: dict[str, list[float]] = {}
    for doc in interest_docs:
        counts = stats.doc_term_counts.get(doc.id)
        if counts is None:
            raise ValidationError(f"interest document {doc.id!r} not present in corpus stats")
        scored = [(g2_score(term, doc, stats), term) for term in counts]
        scored.sort(key=lambda pair: (-pair[0], pair[1]))
        for score, term in scored[:top_k_per_doc]:
            pooled.setdefault(term, []).append(score)
    if not pooled:
        raise TopicError("interest documents contain no content words")
    averaged = {term: sum(scores) / len(scores) for term, scores in pooled.items()}
    values = list(averaged.values())
    mean = sum(values) / len(values)
    var = sum((v - mean) ** 2 for v in values) / len(values)
    cutoff = mean + threshold_sigma * math.sqrt(var)
    words = {term: score for term, score in averaged.items() if score > cutoff}
    if not words:
        raise TopicError(
            f"no words above mean + {threshold_sigma} sigma; "
            "lower --topic-sigma or supply more distinctive interest documents"
        )
    return Topic(words, threshold_sigma, [d.id for d in interest_docs])


def spread_activation(
    topic: Topic,
    doc: Document,
    table: CooccurrenceTable,
    lex: SynonymLexicon,
    decay: float = DEFAULT_DECAY,
    iterations: int = DEFAULT_ITERATIONS,
) -> KeywordMap:
    """Propagate topic-word weights to linked words within the document.

    Activation is seeded with topic scores and spread along co-occurrence
    and synonym links; each hop multiplies by the decay factor and a word
    never loses activation it already has.
    """
    if not 0.0 < decay < 1.0:
        raise ValidationError(f"decay must be in (0, 1), got {decay}")
    if iterations < 1:
        raise ValidationError(f"iterations must be >= 1, got {iterations}")
    words = sorted(doc.content_term_counts().keys())
    activation = {w: topic.words.get(w, 0.0) for w in words}
    neighbors: dict[str, list[str]] = {w: [] for w in words}
    for i, a in enumerate(words):
        for b in words[i + 1 :]:
            if (a, b) in table or lex.linked(a, b):
                neighbors[a].append(b)
                neighbors[b].append(a)
    for _ in range(iterations):
        current = dict(activation)
        for w in words:
            incoming = max((current[v] for v in neighbors[w]), default=0.0)
            activation[w] = max(current[w], decay * incoming)
    return KeywordMap(doc.id, {w: a for w, a in activation.items() if a > 0.0})


def generate_user_focused_labels(
    doc: Document,
    keywords: KeywordMap,
    compression: float,
) -> list[bool]:
    """Label the top ceil(c*N) sentences by mean content-token activation."""
    sentences = doc.sentences()
    weights = []
    for sent in sentences:
        terms = sent.content_terms()
        total = sum(keywords.weights.get(t, 0.0) for t in terms)
        weights.append(total / len(terms) if terms else 0.0)
    k = top_fraction_count(len(sentences), compression)
    order = sorted(range(len(sentences)), key=lambda i: (-weights[i], i))
    labels = [False] * len(sentences)
    for i in order[:k]:
        labels[i] = True
    return labels
