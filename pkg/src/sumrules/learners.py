"""Three trainable classifiers over feature vectors.

All models serialize to JSON and rule models pretty-print in an
English-like style for hand editing.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.stats import beta as beta_dist

from .errors import ClassificationError, NumericError, TrainingError, ValidationError
from .features import ALL_FEATURES, FEATURE_DOMAINS, GENERIC_FEATURES, FeatureVector
from .labeling import LabeledSet

SUMMARY = "summary"
NON_SUMMARY = "non-summary"

DEFAULT_RIDGE = 1e-6
DEFAULT_MIN_LEAF = 5
DEFAULT_CF = 0.25
DEFAULT_BEAM = 5
DEFAULT_MAX_FP_RATE = 0.0
DEFAULT_MAX_CONDITIONS = 4


# ---------------------------------------------------------------------------
# Conditions and rules


@dataclass(frozen=True)
class Condition:
    feature: str
    test: str  # eq | in | le | ge | range
    args: tuple

    def holds(self, vector: FeatureVector) -> bool:
        value = vector.get(self.feature)
        if value is None:
            raise ClassificationError(f"vector is missing feature {self.feature!r}")
        if self.test == "eq":
            return value == self.args[0]
        if self.test == "in":
            return value in self.args
        if self.test == "le":
            return value <= self.args[0]
        if self.test == "ge":
            return value >= self.args[0]
        if self.test == "range":
            return self.args[0] <= value <= self.args[1]
        raise ValidationError(f"unknown condition test {self.test!r}")

    def to_json(self) -> dict:
        return {"feature": self.feature, "test": self.test, "args": list(self.args)}

    @classmethod
    def from_json(cls, obj: dict) -> "Condition":
        return cls(obj["feature"], obj["test"], tuple(obj["args"]))


@dataclass
class Rule:
    conditions: list[Condition]
    klass: str
    quality: float

    def matches(self, vector: FeatureVector) -> bool:
        return all(c.holds(vector) for c in self.conditions)

    def to_json(self) -> dict:
        return {
            "conditions": [c.to_json() for c in self.conditions],
            "class": self.klass,
            "quality": self.quality,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Rule":
        return cls([Condition.from_json(c) for c in obj["conditions"]], obj["class"], obj["quality"])


@dataclass
class RuleSet:
    rules: list[Rule]
    default_class: str
    uncovered_positives: int = 0

    def __post_init__(self) -> None:
        self.rules.sort(key=lambda r: -r.quality)

    def classify(self, vector: FeatureVector) -> str:
        for rule in self.rules:
            if rule.matches(vector):
                return rule.klass
        return self.default_class

    def score(self, vector: FeatureVector) -> float:
        """Quality of the best fired summary rule; 0 when none fires."""
        best = 0.0
        for rule in self.rules:
            if rule.klass == SUMMARY and rule.quality > best and rule.matches(vector):
                best = rule.quality
        return best

    def referenced_features(self) -> set[str]:
        return {c.feature for r in self.rules for c in r.conditions}

    def to_json(self) -> dict:
        return {
            "type": "rules",
            "rules": [r.to_json() for r in self.rules],
            "default_class": self.default_class,
        }


@dataclass
class LinearModel:
    means: dict[str, float]
    stds: dict[str, float]
    weights: dict[str, float]
    threshold: float

    def score(self, vector: FeatureVector) -> float:
        proj = 0.0
        for feature, w in self.weights.items():
            value = vector.get(feature)
            if value is None:
                raise ClassificationError(f"vector is missing feature {feature!r}")
            proj += w * (value - self.means[feature]) / self.stds[feature]
        return proj - self.threshold

    def classify(self, vector: FeatureVector) -> str:
        return SUMMARY if self.score(vector) >= 0.0 else NON_SUMMARY

    def to_json(self) -> dict:
        return {
            "type": "linear",
            "means": self.means,
            "stds": self.stds,
            "weights": self.weights,
            "threshold": self.threshold,
        }


Model = RuleSet | LinearModel


def classify(model: Model, vector: FeatureVector) -> str:
    return model.classify(vector)


def save_model(model: Model, path: str | Path) -> None:
    Path(path).write_text(json.dumps(model.to_json(), indent=2) + "\n", "utf-8")


def model_from_json(obj: dict) -> Model:
    if obj.get("type") == "rules":
        return RuleSet([Rule.from_json(r) for r in obj["rules"]], obj["default_class"])
    if obj.get("type") == "linear":
        return LinearModel(obj["means"], obj["stds"], obj["weights"], obj["threshold"])
    raise ValidationError(f"unknown model type {obj.get('type')!r}")


def load_model(path: str | Path) -> Model:
    return model_from_json(json.loads(Path(path).read_text("utf-8")))


def _training_features(train: LabeledSet) -> list[str]:
    if all(v.has_user_features() for v in train.vectors):
        return list(ALL_FEATURES)
    return list(GENERIC_FEATURES)


# ---------------------------------------------------------------------------
# Linear discriminant


def train_linear_discriminant(train: LabeledSet, ridge: float = DEFAULT_RIDGE) -> LinearModel:
    """Fisher discriminant on z-scored features.

    Zero-variance features are dropped; the decision threshold is the
    midpoint of the projected class means.
    """
    features = _training_features(train)
    y = np.array([bool(v.label) for v in train.vectors])
    if y.all() or not y.any():
        raise TrainingError("linear discriminant needs at least one example per class")
    X = np.array([[float(v.get(f)) for f in features] for v in train.vectors])
    means = X.mean(axis=0)
    stds = X.std(axis=0)
    keep = stds > 0.0
    if not keep.any():
        raise TrainingError("all features have zero variance")
    features = [f for f, k in zip(features, keep) if k]
    X = (X[:, keep] - means[keep]) / stds[keep]
    mu_pos = X[y].mean(axis=0)
    mu_neg = X[~y].mean(axis=0)
    sw = np.zeros((X.shape[1], X.shape[1]))
    for cls_mask in (y, ~y):
        centered = X[cls_mask] - X[cls_mask].mean(axis=0)
        sw += centered.T @ centered
    sw += ridge * np.eye(sw.shape[0])
    try:
        w = np.linalg.solve(sw, mu_pos - mu_neg)
    except np.linalg.LinAlgError as exc:
        raise NumericError(
            "within-class scatter is singular; retrain with ridge > 0"
        ) from exc
    if not np.isfinite(w).all():
        raise NumericError("non-finite discriminant weights; retrain with ridge > 0")
    threshold = float(w @ (mu_pos + mu_neg) / 2.0)
    kept_means = means[keep]
    kept_stds = stds[keep]
    return LinearModel(
        means={f: float(m) for f, m in zip(features, kept_means)},
        stds={f: float(s) for f, s in zip(features, kept_stds)},
        weights={f: float(x) for f, x in zip(features, w)},
        threshold=threshold,
    )


# ---------------------------------------------------------------------------
# Decision-tree rules


def pessimistic_error(errors: int, covered: int, cf: float) -> float:
    """Upper bound of the one-sided binomial confidence interval on error rate."""
    if covered == 0:
        return 1.0
    if errors >= covered:
        return 1.0
    return float(beta_dist.ppf(1.0 - cf, errors + 1, covered - errors))


def laplace_quality(correct: int, covered: int) -> float:
    return (correct + 1) / (covered + 2)


def _is_categorical(feature: str) -> bool:
    return FEATURE_DOMAINS.get(feature) is not None


def _entropy(n_pos: int, n_neg: int) -> float:
    total = n_pos + n_neg
    if total == 0:
        return 0.0
    h = 0.0
    for n in (n_pos, n_neg):
        if n:
            p = n / total
            h -= p * math.log2(p)
    return h


def _candidate_splits(rows: list[FeatureVector], feature: str) -> list[Condition]:
    values = sorted({v.get(feature) for v in rows})
    if len(values) < 2:
        return []
    if _is_categorical(feature):
        return [Condition(feature, "eq", (val,)) for val in values]
    mids = [(a + b) / 2.0 for a, b in zip(values, values[1:])]
    return [Condition(feature, "le", (m,)) for m in mids]


def _negate(cond: Condition) -> Condition:
    """Complement condition within the feature's declared domain."""
    if cond.test == "eq":
        domain = FEATURE_DOMAINS[cond.feature]
        rest = tuple(v for v in domain if v != cond.args[0])
        if len(rest) == 1:
            return Condition(cond.feature, "eq", rest)
        return Condition(cond.feature, "in", rest)
    if cond.test == "le":
        return Condition(cond.feature, "ge", cond.args)
    raise ValidationError(f"cannot negate condition test {cond.test!r}")


def train_tree_rules(
    train: LabeledSet,
    min_leaf: int = DEFAULT_MIN_LEAF,
    cf: float = DEFAULT_CF,
) -> RuleSet:
    """Gain-ratio decision tree converted to pessimistically pruned rules."""
    rows = train.vectors
    if not rows:
        raise TrainingError("empty training set")
    if len(rows) < 2 * min_leaf:
        raise TrainingError(f"need at least {2 * min_leaf} examples, got {len(rows)}")
    features = _training_features(train)

    raw_rules: list[tuple[list[Condition], str]] = []

    def grow(node_rows: list[FeatureVector], path: list[Condition]) -> None:
        n_pos = sum(1 for v in node_rows if v.label)
        n_neg = len(node_rows) - n_pos
        majority = SUMMARY if n_pos >= n_neg else NON_SUMMARY
        if n_pos == 0 or n_neg == 0 or len(node_rows) < 2 * min_leaf:
            raw_rules.append((path, majority))
            return
        parent_h = _entropy(n_pos, n_neg)
        best = None
        for feature in features:
            for cond in _candidate_splits(node_rows, feature):
                left = [v for v in node_rows if cond.holds(v)]
                right = [v for v in node_rows if not cond.holds(v)]
                if len(left) < min_leaf or len(right) < min_leaf:
                    continue
                gain = parent_h
                split_info = 0.0
                for part in (left, right):
                    p = len(part) / len(node_rows)
                    pos = sum(1 for v in part if v.label)
                    gain -= p * _entropy(pos, len(part) - pos)
                    split_info -= p * math.log2(p)
                if gain <= 1e-12 or split_info <= 0.0:
                    continue
                ratio = gain / split_info
                if best is None or ratio > best[0]:
                    best = (ratio, cond, left, right)
        if best is None:
            raw_rules.append((path, majority))
            return
        _, cond, left, right = best
        grow(left, path + [cond])
        grow(right, path + [_negate(cond)])

    grow(list(rows), [])

    def rule_error(conditions: list[Condition], klass: str) -> float:
        covered = [v for v in rows if all(c.holds(v) for c in conditions)]
        errors = sum(1 for v in covered if (SUMMARY if v.label else NON_SUMMARY) != klass)
        return pessimistic_error(errors, len(covered), cf)

    pruned: list[Rule] = []
    seen: set[tuple] = set()
    for conditions, klass in raw_rules:
        if not conditions:
            continue
        current = rule_error(conditions, klass)
        changed = True
        while changed and len(conditions) > 1:
            changed = False
            for i in range(len(conditions)):
                trimmed = conditions[:i] + conditions[i + 1 :]
                err = rule_error(trimmed, klass)
                if err <= current:
                    conditions = trimmed
                    current = err
                    changed = True
                    break
        key = (frozenset(conditions), klass)
        if key in seen:
            continue
        seen.add(key)
        covered = [v for v in rows if all(c.holds(v) for c in conditions)]
        correct = sum(1 for v in covered if (SUMMARY if v.label else NON_SUMMARY) == klass)
        pruned.append(Rule(list(conditions), klass, laplace_quality(correct, len(covered))))

    ruleset = RuleSet(pruned, NON_SUMMARY)
    uncovered = [v for v in rows if not any(r.matches(v) for r in ruleset.rules)]
    pool = uncovered if uncovered else list(rows)
    n_pos = sum(1 for v in pool if v.label)
    ruleset.default_class = SUMMARY if n_pos > len(pool) - n_pos else NON_SUMMARY
    return ruleset


# ---------------------------------------------------------------------------
# Sequential covering


def train_covering_rules(
    train: LabeledSet,
    beam: int = DEFAULT_BEAM,
    max_fp_rate: float = DEFAULT_MAX_FP_RATE,
    max_conditions: int = DEFAULT_MAX_CONDITIONS,
) -> RuleSet:
    """Seed-driven sequential covering with beam search over conjunctions."""
    rows = train.vectors
    positives = [v for v in rows if v.label]
    negatives = [v for v in rows if not v.label]
    if not positives:
        raise TrainingError("covering learner needs at least one positive example")
    features = _training_features(train)

    def _thin(values: list, keep: int = 12) -> list:
        if len(values) <= keep:
            return values
        step = (len(values) - 1) / (keep - 1)
        return sorted({values[round(i * step)] for i in range(keep)})

    def candidates_for(seed: FeatureVector, feature: str) -> list[Condition]:
        seed_val = seed.get(feature)
        if _is_categorical(feature):
            return [Condition(feature, "eq", (seed_val,))]
        values = sorted({v.get(feature) for v in rows})
        lows = _thin([v for v in values if v <= seed_val])
        highs = _thin([v for v in values if v >= seed_val])
        return [Condition(feature, "range", (lo, hi)) for lo in lows for hi in highs]

    def coverage(conditions: list[Condition], pool: list[FeatureVector]) -> list[FeatureVector]:
        return [v for v in pool if all(c.holds(v) for c in conditions)]

    def feasible(conditions: list[Condition]) -> bool:
        neg_cov = len(coverage(conditions, negatives))
        pos_cov = len(coverage(conditions, positives))
        total = neg_cov + pos_cov
        if total == 0:
            return False
        return neg_cov / total <= max_fp_rate

    remaining = list(positives)
    rules: list[Rule] = []
    uncovered_residue = 0

    while remaining:
        seed = remaining[0]
        states: list[list[Condition]] = [[]]
        best: list[Condition] | None = None
        best_pos = -1
        # Conjunctions are capped for readability; uncoverable seeds are
        # skipped and counted rather than memorized with long rules.
        for _depth in range(min(len(features), max_conditions)):
            expansions: list[tuple[int, int, list[Condition]]] = []
            for state in states:
                used = {c.feature for c in state}
                for feature in features:
                    if feature in used:
                        continue
                    for cond in candidates_for(seed, feature):
                        conj = state + [cond]
                        neg_cov = len(coverage(conj, negatives))
                        pos_cov = len(coverage(conj, remaining))
                        expansions.append((neg_cov, -pos_cov, conj))
            if not expansions:
                break
            expansions.sort(key=lambda e: (e[0], e[1]))
            improved = False
            for neg_cov, neg_pos, conj in expansions:
                pos_cov = -neg_pos
                if feasible(conj) and pos_cov > best_pos:
                    best = conj
                    best_pos = pos_cov
                    improved = True
            states = [conj for _, _, conj in expansions[:beam]]
            if best is not None and not improved:
                break
        if best is None or best_pos <= 0:
            uncovered_residue += 1
            remaining = remaining[1:]
            continue
        # Drop conditions that neither lose positives nor break feasibility.
        conditions = list(best)
        simplified = True
        while simplified and len(conditions) > 1:
            simplified = False
            for i in range(len(conditions)):
                trimmed = conditions[:i] + conditions[i + 1 :]
                if feasible(trimmed) and len(coverage(trimmed, remaining)) >= best_pos:
                    conditions = trimmed
                    simplified = True
                    break
        covered_all = coverage(conditions, rows)
        correct = sum(1 for v in covered_all if v.label)
        rules.append(Rule(conditions, SUMMARY, laplace_quality(correct, len(covered_all))))
        covered_now = set(id(v) for v in coverage(conditions, remaining))
        remaining = [v for v in remaining if id(v) not in covered_now]

    ruleset = RuleSet(rules, NON_SUMMARY)
    ruleset.uncovered_positives = uncovered_residue
    return ruleset


# ---------------------------------------------------------------------------
# Pretty printing


_THIRDS = {1: "first", 2: "middle", 3: "last"}
_SPECIAL = {1: "the introduction", 2: "the conclusion", 3: "the body"}


def _describe(cond: Condition) -> str:
    f, test, args = cond.feature, cond.test, cond.args
    if f == "sent_special_section" and test == "eq":
        return f"the sentence is in {_SPECIAL[args[0]]}"
    if f == "sent_special_section" and test == "in":
        return "the sentence is in " + " or ".join(_SPECIAL[a] for a in args)
    if f == "sent_loc_para" and test == "eq":
        return f"the sentence is in the {_THIRDS[args[0]]} third of its paragraph"
    if f == "para_loc_section" and test == "eq":
        return f"its paragraph is in the {_THIRDS[args[0]]} third of the section"
    if f == "depth_sent_section" and test == "eq":
        return f"the sentence is in a section of depth {args[0]}"
    if f.startswith("in_highest_") and test == "eq":
        name = f.removeprefix("in_highest_")
        label = {
            "tf": "high tf",
            "tfidf": "high tf.idf",
            "g2": "high G2",
            "title": "high title-term",
            "pname": "high name-mention",
            "syn": "high synonym-link",
            "cooc": "high co-occurrence-link",
        }[name]
        verb = "is" if args[0] == 1 else "is not"
        return f"it {verb} a {label} sentence"
    if f == "keyword_count":
        noun = "the number of keywords"
    elif f == "keyword_ratio":
        noun = "the keyword to content-word ratio"
    else:
        noun = f
    if test == "range":
        return f"{noun} is between {args[0]} and {args[1]} (inclusive)"
    if test == "le":
        return f"{noun} is at most {args[0]}"
    if test == "ge":
        return f"{noun} is at least {args[0]}"
    if test == "eq":
        return f"{noun} equals {args[0]}"
    return f"{noun} is one of {args}"


def format_rules(ruleset: RuleSet) -> str:
    """English-like rendering of a rule set for human editing."""
    lines = []
    for i, rule in enumerate(ruleset.rules, start=1):
        body = "\nand ".join(_describe(c) for c in rule.conditions)
        outcome = "it is a summary sentence" if rule.klass == SUMMARY else "it is not a summary sentence"
        lines.append(f"Rule {i} (quality {rule.quality:.3f}):\nIf {body},\nthen {outcome}.\n")
    lines.append(f"Otherwise: {ruleset.default_class}.")
    return "\n".join(lines)
