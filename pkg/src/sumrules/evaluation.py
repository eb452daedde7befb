"""Evaluation metrics, the 10-run disjoint-fold protocol, and compression sweeps."""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError, DataError
from .features import FeatureVector
from .labeling import DEFAULT_NEG_RATIO, deduplicate_and_balance
from .learners import (
    DEFAULT_BEAM,
    DEFAULT_CF,
    DEFAULT_MAX_CONDITIONS,
    DEFAULT_MAX_FP_RATE,
    DEFAULT_MIN_LEAF,
    DEFAULT_RIDGE,
    SUMMARY,
    Model,
    RuleSet,
    train_covering_rules,
    train_linear_discriminant,
    train_tree_rules,
)
from .pipeline import (
    Resources,
    build_keyword_maps,
    build_user_topic,
    labeled_vectors_generic,
    labeled_vectors_user,
)

N_FOLDS = 10

LEARNERS = ("linear", "tree", "covering")


@dataclass
class Confusion:
    tp: int = 0
    fp: int = 0
    fn: int = 0
    tn: int = 0

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn

    def add(self, actual: bool, predicted: bool) -> None:
        if actual and predicted:
            self.tp += 1
        elif actual:
            self.fn += 1
        elif predicted:
            self.fp += 1
        else:
            self.tn += 1


def metrics(c: Confusion) -> tuple[float, float, float, float]:
    """(accuracy, precision, recall, f_score) with guarded zero denominators."""
    if c.total == 0:
        raise DataError("empty confusion matrix")
    accuracy = (c.tp + c.tn) / c.total
    precision = c.tp / (c.tp + c.fp) if c.tp + c.fp else 0.0
    recall = c.tp / (c.tp + c.fn) if c.tp + c.fn else 0.0
    f_score = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return accuracy, precision, recall, f_score


@dataclass
class RunResult:
    fold: int
    confusion: Confusion
    accuracy: float
    precision: float
    recall: float
    f_score: float
    test_doc_ids: list[str]

    def to_json(self) -> dict:
        return {
            "fold": self.fold,
            "confusion": {"tp": self.confusion.tp, "fp": self.confusion.fp,
                          "fn": self.confusion.fn, "tn": self.confusion.tn},
            "accuracy": self.accuracy,
            "precision": self.precision,
            "recall": self.recall,
            "f_score": self.f_score,
            "test_doc_ids": self.test_doc_ids,
        }


@dataclass
class EvalReport:
    per_run: list[RunResult]
    mean: dict[str, float]
    std: dict[str, float]
    config: dict
    models: list[Model] = field(default_factory=list, repr=False)

    def to_json(self) -> dict:
        return {
            "per_run": [r.to_json() for r in self.per_run],
            "mean": self.mean,
            "std": self.std,
            "config": self.config,
        }

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n", "utf-8")

    def save_tsv(self, path: str | Path) -> None:
        lines = ["fold\ttp\tfp\tfn\ttn\taccuracy\tprecision\trecall\tf_score"]
        for r in self.per_run:
            c = r.confusion
            lines.append(
                f"{r.fold}\t{c.tp}\t{c.fp}\t{c.fn}\t{c.tn}"
                f"\t{r.accuracy!r}\t{r.precision!r}\t{r.recall!r}\t{r.f_score!r}"
            )
        lines.append(
            "mean\t\t\t\t"
            f"\t{self.mean['accuracy']!r}\t{self.mean['precision']!r}"
            f"\t{self.mean['recall']!r}\t{self.mean['f_score']!r}"
        )
        Path(path).write_text("\n".join(lines) + "\n", "utf-8")


def _aggregate(values: list[float]) -> tuple[float, float]:
    mean = sum(values) / len(values)
    var = sum((v - mean) ** 2 for v in values) / len(values)
    return mean, math.sqrt(var)


def train_learner(learner: str, labeled_set, params: dict | None = None) -> Model:
    params = params or {}
    if learner == "linear":
        return train_linear_discriminant(labeled_set, params.get("ridge", DEFAULT_RIDGE))
    if learner == "tree":
        return train_tree_rules(
            labeled_set, params.get("min_leaf", DEFAULT_MIN_LEAF), params.get("cf", DEFAULT_CF)
        )
    if learner == "covering":
        return train_covering_rules(
            labeled_set,
            params.get("beam", DEFAULT_BEAM),
            params.get("max_fp_rate", DEFAULT_MAX_FP_RATE),
            params.get("max_conditions", DEFAULT_MAX_CONDITIONS),
        )
    raise ConfigError(f"unknown learner {learner!r}; expected one of {LEARNERS}")


def collect_labeled_vectors(
    res: Resources,
    mode: str,
    compression: float,
    interest_ids: list[str] | None = None,
    user_params: dict | None = None,
) -> dict[str, list[FeatureVector]]:
    """Labeled vectors per document id for the requested mode."""
    user_params = user_params or {}
    cache_key = (
        mode,
        compression,
        tuple(interest_ids) if interest_ids else None,
        tuple(sorted(user_params.items())),
    )
    if cache_key in res.vector_cache:
        return res.vector_cache[cache_key]
    vectors_by_doc: dict[str, list[FeatureVector]] = {}
    if mode == "generic":
        for doc_id, doc in res.docs_by_id.items():
            vectors = labeled_vectors_generic(doc, res, compression)
            if vectors is not None:
                vectors_by_doc[doc_id] = vectors
    elif mode == "user":
        if not interest_ids:
            raise ConfigError("mode=user requires an interest document list")
        topic = build_user_topic(
            res,
            interest_ids,
            user_params.get("top_k_per_doc", 50),
            user_params.get("threshold_sigma", 2.5),
        )
        keyword_maps = build_keyword_maps(
            res, topic, user_params.get("decay", 0.9), user_params.get("iterations", 2)
        )
        for doc_id, doc in res.docs_by_id.items():
            vectors_by_doc[doc_id] = labeled_vectors_user(doc, res, keyword_maps[doc_id], compression)
    else:
        raise ConfigError(f"unknown mode {mode!r}; expected 'generic' or 'user'")
    if not vectors_by_doc:
        raise DataError("no labelable documents in corpus")
    res.vector_cache[cache_key] = vectors_by_doc
    return vectors_by_doc


def make_folds(doc_ids: list[str], seed: int, n_folds: int = N_FOLDS) -> list[list[str]]:
    """Seeded shuffle, then a disjoint document-level partition."""
    if len(doc_ids) < n_folds:
        raise DataError(f"need at least {n_folds} documents, got {len(doc_ids)}")
    ids = sorted(doc_ids)
    random.Random(seed).shuffle(ids)
    folds: list[list[str]] = [[] for _ in range(n_folds)]
    for i, doc_id in enumerate(ids):
        folds[i % n_folds].append(doc_id)
    return folds


def cross_validate(
    res: Resources,
    learner: str,
    compression: float,
    seed: int,
    mode: str = "generic",
    interest_ids: list[str] | None = None,
    neg_ratio: float = DEFAULT_NEG_RATIO,
    learner_params: dict | None = None,
    user_params: dict | None = None,
    balance_test: bool = False,
) -> EvalReport:
    """Ten runs of 90% train / 10% test with disjoint document-level test folds."""
    vectors_by_doc = collect_labeled_vectors(res, mode, compression, interest_ids, user_params)
    folds = make_folds(list(vectors_by_doc), seed)
    per_run: list[RunResult] = []
    models: list[Model] = []
    for fold_id, test_ids in enumerate(folds):
        test_set = set(test_ids)
        train_vectors = [
            v for doc_id, vecs in sorted(vectors_by_doc.items())
            if doc_id not in test_set
            for v in vecs
        ]
        assert not any(v.doc_id in test_set for v in train_vectors), "fold leakage"
        labeled_set = deduplicate_and_balance(train_vectors, neg_ratio, seed + fold_id)
        model = train_learner(learner, labeled_set, learner_params)
        models.append(model)

        test_vectors = [v for doc_id in sorted(test_set) for v in vectors_by_doc[doc_id]]
        if balance_test:
            test_vectors = deduplicate_and_balance(test_vectors, neg_ratio, seed + fold_id).vectors
        confusion = Confusion()
        for v in test_vectors:
            predicted = model.classify(v) == SUMMARY
            confusion.add(bool(v.label), predicted)
        accuracy, precision, recall, f_score = metrics(confusion)
        per_run.append(
            RunResult(fold_id, confusion, accuracy, precision, recall, f_score, sorted(test_set))
        )
    names = ("accuracy", "precision", "recall", "f_score")
    mean, std = {}, {}
    for name in names:
        mean[name], std[name] = _aggregate([getattr(r, name) for r in per_run])
    config = {
        "learner": learner,
        "compression": compression,
        "seed": seed,
        "mode": mode,
        "neg_ratio": neg_ratio,
    }
    return EvalReport(per_run, mean, std, config, models)


def rule_overlap(a: Model, b: Model) -> float | None:
    """Fraction of the smaller rule set whose condition sets appear in the larger."""
    if not isinstance(a, RuleSet) or not isinstance(b, RuleSet):
        return None
    sets_a = {(frozenset(r.conditions), r.klass) for r in a.rules}
    sets_b = {(frozenset(r.conditions), r.klass) for r in b.rules}
    if not sets_a or not sets_b:
        return 1.0 if sets_a == sets_b else 0.0
    smaller, larger = sorted((sets_a, sets_b), key=len)
    return len(smaller & larger) / len(smaller)


def learning_curve(
    res: Resources,
    learner: str,
    compression: float,
    seed: int,
    fractions: tuple[float, ...] = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9),
    mode: str = "generic",
    interest_ids: list[str] | None = None,
    neg_ratio: float = DEFAULT_NEG_RATIO,
    learner_params: dict | None = None,
    user_params: dict | None = None,
) -> list[dict]:
    """F-score and accuracy after training on growing prefixes of the train folds."""
    vectors_by_doc = collect_labeled_vectors(res, mode, compression, interest_ids, user_params)
    folds = make_folds(list(vectors_by_doc), seed)
    test_ids = set(folds[0])
    train_ids = [d for fold in folds[1:] for d in fold]
    points = []
    for frac in fractions:
        n = max(1, math.ceil(frac * len(train_ids)))
        subset = train_ids[:n]
        train_vectors = [v for doc_id in subset for v in vectors_by_doc[doc_id]]
        labeled_set = deduplicate_and_balance(train_vectors, neg_ratio, seed)
        model = train_learner(learner, labeled_set, learner_params)
        confusion = Confusion()
        for doc_id in sorted(test_ids):
            for v in vectors_by_doc[doc_id]:
                confusion.add(bool(v.label), model.classify(v) == SUMMARY)
        accuracy, precision, recall, f_score = metrics(confusion)
        points.append(
            {"fraction": frac, "n_train_docs": n, "accuracy": accuracy,
             "precision": precision, "recall": recall, "f_score": f_score}
        )
    return points


def compression_sweep(
    res: Resources,
    learner: str,
    compressions: list[float],
    seed: int,
    mode: str = "generic",
    interest_ids: list[str] | None = None,
    neg_ratio: float = DEFAULT_NEG_RATIO,
    learner_params: dict | None = None,
    user_params: dict | None = None,
) -> tuple[list[EvalReport], list[float | None]]:
    """One cross-validation per compression, plus adjacent rule overlap.

    Overlap is measured between models trained on the full corpus at the
    two adjacent compressions (None for non-rule models).
    """
    for c in compressions:
        if not 0.0 < c <= 1.0:
            raise ConfigError(f"compression must be in (0, 1], got {c}")
    reports = []
    full_models = []
    for c in compressions:
        reports.append(
            cross_validate(
                res, learner, c, seed, mode, interest_ids, neg_ratio, learner_params, user_params
            )
        )
        vectors_by_doc = collect_labeled_vectors(res, mode, c, interest_ids, user_params)
        all_vectors = [v for _, vecs in sorted(vectors_by_doc.items()) for v in vecs]
        labeled_set = deduplicate_and_balance(all_vectors, neg_ratio, seed)
        full_models.append(train_learner(learner, labeled_set, learner_params))
    overlaps: list[float | None] = []
    for a, b in zip(full_models, full_models[1:]):
        overlaps.append(rule_overlap(a, b))
    return reports, overlaps
