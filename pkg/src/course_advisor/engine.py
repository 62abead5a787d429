"""Partial-match inference: count satisfied antecedents, best rule per course wins."""

from __future__ import annotations

from .compiler import RuleSet
from .errors import EmptyRuleSet
from .model import (
    Antecedent,
    NominalEquals,
    Rule,
    ScoreAtLeast,
    Suggestion,
    TaughtSuperset,
    VolunteerProfile,
)


def eval_antecedent(a: Antecedent, p: VolunteerProfile) -> bool:
    match a:
        case NominalEquals(question, label):
            return p.answers.get(question) == label
        case ScoreAtLeast(course, threshold):
            score = p.scores.get(course)
            return score is not None and score >= threshold
        case TaughtSuperset(required):
            return required <= p.taught
    raise TypeError(f"not an antecedent: {a!r}")


def score_rule(r: Rule, p: VolunteerProfile) -> int:
    return sum(eval_antecedent(a, p) for a in r.antecedents)


def course_scores(rs: RuleSet, p: VolunteerProfile) -> dict[str, int]:
    """DT(course): best rule score per course, in schema course order."""
    if not rs.rules:
        raise EmptyRuleSet(f"rule set of expert {rs.expert_id!r} is empty")
    best: dict[str, int] = {}
    for rule in rs.rules:
        s = score_rule(rule, p)
        if s > best.get(rule.posterior, -1):
            best[rule.posterior] = s
    return {c: best[c] for c in rs.schema.courses if c in best}


def suggest(rs: RuleSet, p: VolunteerProfile) -> Suggestion:
    table = course_scores(rs, p)
    top = max(table.values())
    maxima = [c for c, s in table.items() if s == top]
    return Suggestion(rs.expert_id, table, maxima[0], tuple(maxima[1:]))
