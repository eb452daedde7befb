"""The three learners, rule pruning, serialization, and pretty printing."""

import json
import math
import random

import pytest
from scipy.stats import binom

from sumrules.errors import ClassificationError, TrainingError
from sumrules.labeling import LabeledSet, deduplicate_and_balance
from sumrules.learners import (
    NON_SUMMARY,
    SUMMARY,
    Condition,
    LinearModel,
    Rule,
    RuleSet,
    classify,
    format_rules,
    laplace_quality,
    load_model,
    model_from_json,
    pessimistic_error,
    save_model,
    train_covering_rules,
    train_linear_discriminant,
    train_tree_rules,
)
from tests.test_labeling import fv


def make_set(vectors) -> LabeledSet:
    n_pos = sum(1 for v in vectors if v.label)
    return LabeledSet(
        vectors=list(vectors),
        n_raw=len(vectors),
        n_unique=len(vectors),
        n_positive=n_pos,
        n_negative_sampled=len(vectors) - n_pos,
        n_label_conflicts=0,
        rng_seed=0,
    )


# ---------------------------------------------------------------------------
# Conditions, rules, rule sets


def test_condition_tests():
    v = fv(True, keyword_count=6, keyword_ratio=0.5)
    assert Condition("keyword_count", "eq", (6,)).holds(v)
    assert Condition("keyword_count", "in", (5, 6)).holds(v)
    assert Condition("keyword_count", "le", (6,)).holds(v)
    assert Condition("keyword_count", "ge", (6,)).holds(v)
    assert Condition("keyword_count", "range", (5, 7)).holds(v)
    assert not Condition("keyword_count", "range", (7, 9)).holds(v)
    with pytest.raises(ClassificationError):
        Condition("keyword_count", "eq", (6,)).holds(fv(True))  # field unset


def test_empty_ruleset_uses_default():
    rs = RuleSet([], NON_SUMMARY)
    assert rs.classify(fv(True)) == NON_SUMMARY
    assert rs.score(fv(True)) == 0.0


def test_ruleset_orders_by_quality_and_first_match_wins():
    low = Rule([Condition("in_highest_tf", "eq", (1,))], NON_SUMMARY, 0.6)
    high = Rule([Condition("in_highest_tf", "eq", (1,))], SUMMARY, 0.9)
    rs = RuleSet([low, high], NON_SUMMARY)
    assert [r.quality for r in rs.rules] == [0.9, 0.6]
    assert rs.classify(fv(None, in_highest_tf=1)) == SUMMARY
    assert rs.score(fv(None, in_highest_tf=1)) == 0.9


def test_removing_a_rule_changes_classification_as_dictated():
    summary_rule = Rule([Condition("in_highest_tf", "eq", (1,))], SUMMARY, 0.9)
    backup_rule = Rule([Condition("sent_special_section", "eq", (2,))], SUMMARY, 0.7)
    rs = RuleSet([summary_rule, backup_rule], NON_SUMMARY)
    hit_first = fv(None, in_highest_tf=1, sent_special_section=3)
    hit_second = fv(None, in_highest_tf=0, sent_special_section=2)
    assert rs.classify(hit_first) == SUMMARY
    assert rs.classify(hit_second) == SUMMARY
    # Drop the first rule: only vectors matching the remaining rule stay positive.
    edited = RuleSet([backup_rule], NON_SUMMARY)
    assert edited.classify(hit_first) == NON_SUMMARY
    assert edited.classify(hit_second) == SUMMARY


# ---------------------------------------------------------------------------
# Linear discriminant


def random_generic_vector(rng: random.Random, label: bool) -> object:
    return fv(
        label,
        sent_loc_para=rng.randint(1, 3),
        para_loc_section=rng.randint(1, 3),
        sent_special_section=rng.randint(1, 3),
        depth_sent_section=rng.randint(1, 4),
        in_highest_tf=rng.randint(0, 1),
        in_highest_tfidf=rng.randint(0, 1),
        in_highest_g2=rng.randint(0, 1),
        in_highest_title=rng.randint(0, 1),
        in_highest_pname=rng.randint(0, 1),
        in_highest_syn=rng.randint(0, 1),
        in_highest_cooc=rng.randint(0, 1),
    )


def test_linear_recovers_planted_signal_signs():
    rng = random.Random(11)
    vectors = []
    for _ in range(400):
        v = random_generic_vector(rng, False)
        # Planted rule: tf pushes toward summary, g2 pushes away.
        v.label = v.in_highest_tf == 1 and v.in_highest_g2 == 0
        vectors.append(v)
    model = train_linear_discriminant(make_set(vectors))
    assert model.weights["in_highest_tf"] > 0
    assert model.weights["in_highest_g2"] < 0
    assert abs(model.weights["in_highest_tf"]) > abs(model.weights["in_highest_pname"])
    # The 1-D projection with the midpoint threshold separates well; compare
    # against an exhaustive threshold sweep on the same projection (oracle).
    projections = sorted(model.score(v) + model.threshold for v in vectors)
    labels = [v.label for v in vectors]
    accuracy = sum((model.classify(v) == SUMMARY) == v.label for v in vectors) / len(vectors)
    best = 0.0
    for cut in projections:
        correct = sum(
            ((model.score(v) + model.threshold) >= cut) == v.label for v in vectors
        )
        best = max(best, correct / len(vectors))
    assert accuracy >= best - 0.05


def test_linear_needs_both_classes():
    rng = random.Random(3)
    vectors = [random_generic_vector(rng, True) for _ in range(10)]
    with pytest.raises(TrainingError):
        train_linear_discriminant(make_set(vectors))


def test_linear_drops_zero_variance_features():
    rng = random.Random(4)
    vectors = []
    for i in range(40):
        v = random_generic_vector(rng, i % 2 == 0)
        v.depth_sent_section = 2  # constant
        vectors.append(v)
    model = train_linear_discriminant(make_set(vectors))
    assert "depth_sent_section" not in model.weights


# ---------------------------------------------------------------------------
# Pessimistic error and rule quality


def pessimistic_oracle(errors: int, covered: int, cf: float) -> float:
    """Bisection on the binomial CDF: smallest p with P(X <= errors) <= cf."""
    lo, hi = 0.0, 1.0
    for _ in range(200):
        mid = (lo + hi) / 2
        if binom.cdf(errors, covered, mid) > cf:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def test_pessimistic_error_against_binomial_oracle():
    for errors, covered in [(0, 5), (0, 20), (1, 10), (3, 25), (5, 40), (2, 7)]:
        got = pessimistic_error(errors, covered, 0.25)
        want = pessimistic_oracle(errors, covered, 0.25)
        assert got == pytest.approx(want, abs=1e-9)
        assert 0.0 < got < 1.0


def test_pessimistic_error_edges():
    assert pessimistic_error(0, 0, 0.25) == 1.0
    assert pessimistic_error(5, 5, 0.25) == 1.0
    assert pessimistic_error(9, 5, 0.25) == 1.0


def test_pessimistic_error_monotone_in_errors():
    values = [pessimistic_error(e, 30, 0.25) for e in range(0, 10)]
    assert values == sorted(values)


def test_laplace_quality():
    assert laplace_quality(0, 0) == 0.5
    assert laplace_quality(10, 10) == pytest.approx(11 / 12)
    assert laplace_quality(5, 10) == pytest.approx(6 / 12)


# ---------------------------------------------------------------------------
# Tree rules


def test_tree_learns_single_separating_feature():
    rng = random.Random(21)
    vectors = []
    for i in range(30):
        v = random_generic_vector(rng, None)
        v.label = i % 2 == 0
        v.in_highest_tf = 1 if v.label else 0
        vectors.append(v)
    model = train_tree_rules(make_set(vectors))
    summary_rules = [r for r in model.rules if r.klass == SUMMARY]
    assert len(summary_rules) == 1
    assert summary_rules[0].conditions == [Condition("in_highest_tf", "eq", (1,))]
    assert all(model.classify(v) == (SUMMARY if v.label else NON_SUMMARY) for v in vectors)


def test_tree_pure_class_gives_empty_rules_with_majority_default():
    vectors = [fv(True, keyword_count=i, keyword_ratio=0.0) for i in range(12)]
    model = train_tree_rules(make_set(vectors))
    assert model.rules == []
    assert model.default_class == SUMMARY


def test_tree_needs_enough_examples():
    with pytest.raises(TrainingError):
        train_tree_rules(make_set([fv(True), fv(False)]))


def test_tree_respects_min_leaf():
    rng = random.Random(22)
    vectors = []
    for i in range(40):
        v = random_generic_vector(rng, i % 2 == 0)
        vectors.append(v)
    model = train_tree_rules(make_set(vectors), min_leaf=5)
    for rule in model.rules:
        covered = [v for v in vectors if rule.matches(v)]
        assert len(covered) >= 5


# ---------------------------------------------------------------------------
# Sequential covering


def test_covering_single_distinct_positive():
    negatives = [fv(False, keyword_count=i, keyword_ratio=0.0) for i in range(10)]
    positive = fv(True, keyword_count=99, keyword_ratio=1.0, in_highest_tf=1)
    model = train_covering_rules(make_set([positive, *negatives]))
    assert len(model.rules) == 1
    assert model.rules[0].matches(positive)
    assert not any(model.rules[0].matches(n) for n in negatives)
    assert model.uncovered_positives == 0


def test_covering_learns_keyword_interval():
    # Positives are exactly keyword_count in [5, 7]; everything else negative.
    vectors = []
    for count in range(0, 12):
        for _ in range(3):
            vectors.append(
                fv(5 <= count <= 7, keyword_count=count, keyword_ratio=count / 12)
            )
    model = train_covering_rules(make_set(vectors))
    assert all(r.klass == SUMMARY for r in model.rules)
    kw_conditions = [
        c for r in model.rules for c in r.conditions if c.feature == "keyword_count"
    ]
    assert any(c.test == "range" and 5 <= c.args[0] and c.args[1] <= 7 for c in kw_conditions)
    for v in vectors:
        assert model.classify(v) == (SUMMARY if v.label else NON_SUMMARY)
    # Oracle: enumerate every keyword_count interval; [5, 7] is the unique
    # zero-false-positive interval with maximal coverage.
    best = None
    for lo in range(0, 12):
        for hi in range(lo, 12):
            pos = sum(1 for v in vectors if v.label and lo <= v.keyword_count <= hi)
            neg = sum(1 for v in vectors if not v.label and lo <= v.keyword_count <= hi)
            if neg == 0 and (best is None or pos > best[0]):
                best = (pos, lo, hi)
    assert best == (9, 5, 7)


def test_covering_requires_positives():
    with pytest.raises(TrainingError):
        train_covering_rules(make_set([fv(False)]))


def test_covering_counts_uncoverable_positives():
    # A positive identical to a negative can never be covered at fp-rate 0.
    twin_pos = fv(True)
    twin_neg = fv(False)
    model = train_covering_rules(make_set([twin_pos, twin_neg]))
    assert model.uncovered_positives == 1
    assert model.rules == []


def test_covering_rules_have_no_false_positives_on_training_data():
    rng = random.Random(30)
    vectors = []
    for i in range(60):
        v = random_generic_vector(rng, rng.random() < 0.4)
        vectors.append(v)
    model = train_covering_rules(make_set(vectors))
    negatives = [v for v in vectors if not v.label]
    for rule in model.rules:
        assert not any(rule.matches(n) for n in negatives)


# ---------------------------------------------------------------------------
# Serialization and formatting


def test_model_json_round_trip_all_types(tmp_path):
    rng = random.Random(40)
    vectors = [random_generic_vector(rng, rng.random() < 0.5) for _ in range(60)]
    if not any(v.label for v in vectors):
        vectors[0].label = True
    probes = [random_generic_vector(rng, None) for _ in range(100)]
    for name, train in (
        ("linear", train_linear_discriminant),
        ("tree", train_tree_rules),
        ("covering", train_covering_rules),
    ):
        model = train(make_set(vectors))
        path = tmp_path / f"{name}.json"
        save_model(model, path)
        loaded = load_model(path)
        assert [classify(loaded, p) for p in probes] == [classify(model, p) for p in probes]
        # A second round trip is byte-identical.
        again = tmp_path / f"{name}2.json"
        save_model(loaded, again)
        assert again.read_bytes() == path.read_bytes()


def test_model_from_json_rejects_unknown_type():
    with pytest.raises(Exception):
        model_from_json({"type": "mystery"})


def test_format_rules_is_english_like():
    rs = RuleSet(
        [
            Rule(
                [
                    Condition("sent_special_section", "eq", (2,)),
                    Condition("in_highest_tfidf", "eq", (1,)),
                ],
                SUMMARY,
                0.9,
            ),
            Rule([Condition("keyword_count", "range", (5, 7))], SUMMARY, 0.8),
        ],
        NON_SUMMARY,
    )
    text = format_rules(rs)
    assert "the sentence is in the conclusion" in text
    assert "it is a high tf.idf sentence" in text
    assert "the number of keywords is between 5 and 7 (inclusive)" in text
    assert "then it is a summary sentence." in text
    assert "Otherwise: non-summary." in text
