import dataclasses
import random

import pytest
from hypothesis import given, settings, strategies as st

from _gen import brute_force_score, random_profile, random_questionnaire
from course_advisor.compiler import RuleSet, build_tree, extract_rules
from course_advisor.engine import course_scores, eval_antecedent, score_rule, suggest
from course_advisor.errors import EmptyRuleSet
from course_advisor.model import (
    NominalEquals,
    Rule,
    ScoreAtLeast,
    TaughtSuperset,
    VolunteerProfile,
)


def test_antecedents_against_f1(f1):
    assert eval_antecedent(NominalEquals("msc", "AI"), f1)
    assert eval_antecedent(ScoreAtLeast("AI", 18), f1)
    assert not eval_antecedent(TaughtSuperset(frozenset({"AI", "AD"})), f1)
    assert eval_antecedent(TaughtSuperset(frozenset({"NS"})), f1)
    assert not eval_antecedent(ScoreAtLeast("NS", 15), f1)  # no NS score at all


def test_none_matches_nothing(f1):
    p = dataclasses.replace(f1, answers={**f1.answers, "phd": None})
    assert not eval_antecedent(NominalEquals("phd", "AI"), p)


def test_threshold_is_inclusive():
    p = VolunteerProfile("x", {}, {"AI": 18})
    assert eval_antecedent(ScoreAtLeast("AI", 18), p)
    assert not eval_antecedent(ScoreAtLeast("AI", 19), p)


def test_worked_example_rule_counts(rules3, f1):
    assert [score_rule(r, f1) for r in rules3.rules] == [3, 1, 2]


def test_worked_example_table(rules3, f1):
    assert course_scores(rules3, f1) == {"AI": 3, "DB": 1, "NS": 2}
    s = suggest(rules3, f1)
    assert s.chosen == "AI" and s.tied_with == ()
    assert s.expert_id == "cs1"


def test_max_over_same_course(schema):
    low = Rule((NominalEquals("bsc", "Software"),) * 2 + (NominalEquals("msc", "AI"),) * 3, "AI")
    high = Rule((NominalEquals("bsc", "Hardware"),) * 4 + (NominalEquals("msc", "AI"),), "AI")
    p = VolunteerProfile("x", {"bsc": "Hardware", "msc": "Software"})
    assert score_rule(low, p) == 0 and score_rule(high, p) == 4
    rs = RuleSet((low, high), "e", schema)
    assert course_scores(rs, p) == {"AI": 4}


def test_all_tie_breaks_by_schema_order(table1):
    rs = extract_rules(build_tree(table1))
    nobody = VolunteerProfile("n", {"bsc": None, "msc": None, "phd": None})
    s = suggest(rs, nobody)
    assert set(s.course_scores.values()) == {0}
    assert s.chosen == "AI"
    assert s.tied_with == ("DB", "NS", "CN", "AD")


def test_empty_rule_set(schema, f1):
    with pytest.raises(EmptyRuleSet):
        suggest(RuleSet((), "e", schema), f1)


def test_full_table_matches_brute_force(table1):
    rs = extract_rules(build_tree(table1))
    rng = random.Random(7)
    for _ in range(300):
        p = random_profile(rng, table1.schema)
        expected = {}
        for r in rs.rules:
            expected[r.posterior] = max(expected.get(r.posterior, 0), brute_force_score(r, p))
        assert course_scores(rs, p) == expected


def _brute_suggest(rules, p, courses):
    best = {}
    for r in rules:
        best[r.posterior] = max(best.get(r.posterior, -1), brute_force_score(r, p))
    top = max(best.values())
    maxima = [c for c in courses if best.get(c) == top]
    return maxima[0], tuple(maxima[1:])


@settings(max_examples=200)
@given(st.randoms(use_true_random=False))
def test_argmax_invariance(rng):
    q = random_questionnaire(rng)
    rs = extract_rules(build_tree(q))
    p = random_profile(rng, q.schema)
    base = suggest(rs, p)
    assert (base.chosen, base.tied_with) == _brute_suggest(rs.rules, p, q.schema.courses)
    doubled = dataclasses.replace(rs, rules=rs.rules + rs.rules)
    shuffled = list(rs.rules)
    rng.shuffle(shuffled)
    for variant in (doubled, dataclasses.replace(rs, rules=tuple(shuffled))):
        assert suggest(variant, p) == base


@settings(max_examples=200)
@given(st.randoms(use_true_random=False))
def test_dominated_rule_removal(rng):
    q = random_questionnaire(rng)
    rs = extract_rules(build_tree(q))
    p = random_profile(rng, q.schema)
    base = suggest(rs, p)
    keep = []
    for course in q.schema.courses:
        group = [r for r in rs.rules if r.posterior == course]
        if group:
            top = max(score_rule(r, p) for r in group)
            keep.extend(r for r in group if score_rule(r, p) == top)
    s = suggest(dataclasses.replace(rs, rules=tuple(keep)), p)
    assert (s.chosen, s.tied_with, s.course_scores) == (base.chosen, base.tied_with, base.course_scores)


def _augment(rng, p, schema):
    choice = rng.randrange(3)
    if choice == 0:
        return dataclasses.replace(p, taught=p.taught | {rng.choice(schema.courses)})
    if choice == 1:
        c = rng.choice(schema.courses)
        return dataclasses.replace(p, scores={**p.scores, c: p.scores.get(c, 0) + rng.randint(0, 5)})
    missing = [c for c in schema.courses if c not in p.scores]
    if not missing:
        return p
    return dataclasses.replace(p, scores={**p.scores, rng.choice(missing): rng.randint(-5, 30)})


@settings(max_examples=300)
@given(st.randoms(use_true_random=False))
def test_bounds_and_monotonicity(rng):
    q = random_questionnaire(rng)
    rs = extract_rules(build_tree(q))
    p = random_profile(rng, q.schema)
    for r in rs.rules:
        s = score_rule(r, p)
        assert 0 <= s <= len(r.antecedents)
        assert s <= score_rule(r, _augment(rng, p, q.schema))


def test_exact_row_profile_reaches_arity(table1):
    rs = extract_rules(build_tree(table1))
    p = VolunteerProfile(
        "ai", {"bsc": "Software", "msc": "AI", "phd": "AI"}, {"AI": 18}, frozenset({"AI", "AD"})
    )
    s = suggest(rs, p)
    assert s.course_scores["AI"] == 5 and s.chosen == "AI"
