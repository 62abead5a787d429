from collections import Counter
import dataclasses

import pytest
from hypothesis import given, settings, strategies as st

from _gen import oracle_leaf_count, oracle_rules, random_questionnaire
from course_advisor.compiler import build_tree, compile_kb, extract_rules
from course_advisor.errors import EmptyEnsemble, EmptyQuestionnaire, SchemaMismatch
from course_advisor.model import NominalEquals, ScoreAtLeast, TaughtSuperset


def test_table1_tree(table1):
    tree = build_tree(table1)
    assert tree.leaf_count == oracle_leaf_count(table1) == 6
    assert tree.depths() == {5}


def test_trie_merges_shared_prefixes(table1):
    root = build_tree(table1).root
    # Table 1 opens with only two distinct Bs.c answers
    assert list(root.children) == ["Software", "Hardware"]
    assert list(root.children["Hardware"].children) == ["Structure"]


def test_table1_rules_match_oracle(table1):
    rs = extract_rules(build_tree(table1))
    assert Counter(rs.rules) == Counter(oracle_rules(table1))
    ad = [r for r in rs.rules if r.posterior == "AD"]
    assert len(ad) == 2
    diff = [i for i, (a, b) in enumerate(zip(ad[0].antecedents, ad[1].antecedents)) if a != b]
    assert diff == [1]  # the Ms.c antecedent


def test_worked_example_rule_set(rules3):
    a, b, c = rules3.rules
    assert a.antecedents == (
        NominalEquals("bsc", "Software"),
        NominalEquals("msc", "AI"),
        NominalEquals("phd", "AI"),
        ScoreAtLeast("AI", 18),
        TaughtSuperset(frozenset({"AI", "AD"})),
    )
    assert (a.posterior, b.posterior, c.posterior) == ("AI", "DB", "NS")
    assert c.antecedents[0] == NominalEquals("bsc", "Hardware")
    assert c.antecedents[3] == ScoreAtLeast("NS", 15)
    assert c.antecedents[4] == TaughtSuperset(frozenset({"NS", "CN"}))
    assert [r.origin for r in rules3.rules] == [("cs1", 1), ("cs1", 2), ("cs1", 3)]


def test_single_path(table1):
    q = table1.restricted(["DB"])
    tree = build_tree(q)
    [(path, course)] = list(tree.paths())
    assert path == ("Software", "Software", "Software", 15, frozenset({"DB"}))
    [rule] = extract_rules(tree).rules
    assert rule.posterior == course == "DB"
    assert len(rule.antecedents) == 5


def test_empty_questionnaire(table1):
    with pytest.raises(EmptyQuestionnaire):
        build_tree(table1.restricted([]))


def test_identical_courses_get_separate_leaves(table1):
    rows = dict(table1.rows)
    rows["CN"] = rows["NS"]
    q = dataclasses.replace(table1, rows=rows)
    tree = build_tree(q)
    assert tree.leaf_count == 6
    assert sorted(course for path, course in tree.paths() if path[4] == frozenset({"NS", "CN"})) == ["CN", "NS"]


def test_compile_kb(table1):
    [rs] = compile_kb([table1])
    assert len(rs) == 6
    many = compile_kb([table1] * 5)
    assert len(many) == 5 and all(r == many[0] for r in many)


def test_compile_kb_errors(table1):
    with pytest.raises(EmptyEnsemble):
        compile_kb([])
    other = dataclasses.replace(
        table1, schema=dataclasses.replace(table1.schema, questions=table1.schema.questions[:4])
    )
    with pytest.raises(SchemaMismatch):
        compile_kb([table1, other])


def test_provenance_is_stable(table1):
    a = extract_rules(build_tree(table1)).provenance
    b = extract_rules(build_tree(dataclasses.replace(table1))).provenance
    assert a == b and a.startswith("sha256:")


@settings(max_examples=200)
@given(st.randoms(use_true_random=False))
def test_round_trip_against_brute_force(rng):
    q = random_questionnaire(rng, max_courses=6, max_alts=3)
    tree = build_tree(q)
    rs = extract_rules(tree)
    assert Counter(rs.rules) == Counter(oracle_rules(q))
    assert tree.leaf_count == oracle_leaf_count(q) == len(rs)
    assert tree.depths() == {q.schema.arity}
    assert {len(r.antecedents) for r in rs.rules} == {q.schema.arity}
    assert [r.origin[1] for r in rs.rules] == list(range(1, len(rs) + 1))
