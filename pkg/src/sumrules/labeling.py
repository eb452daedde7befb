"""Abstract-similarity labeling, deduplication, and training-set balancing."""

from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import dataclass

from .corpus import CorpusStats, Document, Sentence
from .errors import LabelingError, TrainingError
from .features import FeatureVector, top_fraction_count

# Mirrors the reference positive:negative balance of 182:214.
DEFAULT_NEG_RATIO = 214 / 182


@dataclass
class LabeledSet:
    vectors: list[FeatureVector]
    n_raw: int
    n_unique: int
    n_positive: int
    n_negative_sampled: int
    n_label_conflicts: int
    rng_seed: int


def _side_weights(counts: Counter, stats: CorpusStats) -> dict[str, float]:
    """Per-side tf.idf weights: tf normalized by the side's max count."""
    if not counts:
        return {}
    max_count = max(counts.values())
    weights = {}
    for term, count in counts.items():
        df = stats.df.get(term, 0)
        if df == 0:
            weights[term] = 0.0
        else:
            weights[term] = (count / max_count) * (math.log(stats.n_docs) - math.log(df) + 1.0)
    return weights


def sentence_abstract_similarity(
    s1: Sentence,
    abstract: list[Sentence],
    doc: Document,
    stats: CorpusStats,
) -> float:
    """Shared-word count plus tf.idf cosine between sentence and whole abstract."""
    if not abstract:
        raise LabelingError(f"document {doc.id!r} has an empty abstract")
    sent_counts = Counter(s1.content_terms())
    abs_counts: Counter = Counter()
    for s in abstract:
        abs_counts.update(s.content_terms())
    n1 = len(set(sent_counts) & set(abs_counts))
    w1 = _side_weights(sent_counts, stats)
    w2 = _side_weights(abs_counts, stats)
    dot = sum(w1[t] * w2.get(t, 0.0) for t in w1)
    norm1 = math.sqrt(sum(w * w for w in w1.values()))
    norm2 = math.sqrt(sum(w * w for w in w2.values()))
    if norm1 == 0.0 or norm2 == 0.0:
        return float(n1)
    return n1 + dot / (norm1 * norm2)


def label_document(doc: Document, compression: float, stats: CorpusStats) -> list[bool]:
    """Mark the top ceil(c*N) abstract-similar sentences positive."""
    if not doc.abstract:
        raise LabelingError(f"document {doc.id!r} has no abstract")
    sentences = doc.sentences()
    sims = [sentence_abstract_similarity(s, doc.abstract, doc, stats) for s in sentences]
    k = top_fraction_count(len(sentences), compression)
    order = sorted(range(len(sentences)), key=lambda i: (-sims[i], i))
    labels = [False] * len(sentences)
    for i in order[:k]:
        labels[i] = True
    return labels


def deduplicate_and_balance(
    vectors: list[FeatureVector],
    neg_ratio: float = DEFAULT_NEG_RATIO,
    seed: int = 0,
) -> LabeledSet:
    """Collapse feature-identical vectors and sample negatives to balance.

    Uniqueness is over feature fields plus label; a feature-identical vector
    seen with both labels survives once per label. All unique positives are
    kept; negatives are sampled without replacement down to
    ceil(neg_ratio * n_positive).
    """
    seen: dict[tuple, FeatureVector] = {}
    for v in vectors:
        if v.label is None:
            raise TrainingError("deduplicate_and_balance requires labeled vectors")
        key = (*v.feature_key(), v.label)
        if key not in seen:
            seen[key] = v
    uniques = list(seen.values())
    positives = [v for v in uniques if v.label]
    negatives = [v for v in uniques if not v.label]
    if not positives:
        raise TrainingError("no positive examples after deduplication")
    feature_keys = Counter(v.feature_key() for v in uniques)
    n_conflicts = sum(1 for count in feature_keys.values() if count > 1)

    n_neg = min(len(negatives), math.ceil(neg_ratio * len(positives)))
    rng = random.Random(seed)
    sampled = rng.sample(negatives, n_neg)
    balanced = positives + sampled
    return LabeledSet(
        vectors=balanced,
        n_raw=len(vectors),
        n_unique=len(uniques),
        n_positive=len(positives),
        n_negative_sampled=n_neg,
        n_label_conflicts=n_conflicts,
        rng_seed=seed,
    )
