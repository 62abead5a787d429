"""Plurality voting across experts."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .compiler import RuleSet
from .engine import suggest
from .errors import EmptyEnsemble, SchemaMismatch
from .model import QuestionnaireSchema, Suggestion, VolunteerProfile


@dataclass(frozen=True)
class VoteResult:
    per_expert: tuple[Suggestion, ...]
    tally: Mapping[str, int]
    winner: str
    tie_broken: bool


def common_schema(kbs: Sequence[RuleSet]) -> QuestionnaireSchema:
    if not kbs:
        raise EmptyEnsemble("no rule sets given")
    schema = kbs[0].schema
    for rs in kbs[1:]:
        if rs.schema != schema:
            raise SchemaMismatch(
                f"expert {rs.expert_id!r} uses a different schema than {kbs[0].expert_id!r}"
            )
    return schema


def tally_votes(
    suggestions: Sequence[Suggestion], courses: Sequence[str]
) -> tuple[dict[str, int], str, bool]:
    """Plurality over chosen courses.

    Vote ties go to the greatest course score summed over experts, then to
    schema order. Returns (tally, winner, tie_broken).
    """
    votes = {c: 0 for c in courses}
    summed = {c: 0 for c in courses}
    for s in suggestions:
        votes[s.chosen] += 1
        for c, v in s.course_scores.items():
            summed[c] += v
    top = max(votes.values())
    leaders = [c for c in courses if votes[c] == top]
    best_sum = max(summed[c] for c in leaders)
    winner = next(c for c in leaders if summed[c] == best_sum)
    tally = {c: n for c, n in votes.items() if n}
    return tally, winner, len(leaders) > 1


def suggest_ensemble(kbs: Sequence[RuleSet], p: VolunteerProfile) -> VoteResult:
    schema = common_schema(kbs)
    per_expert = tuple(suggest(rs, p) for rs in kbs)
    tally, winner, tie_broken = tally_votes(per_expert, schema.courses)
    return VoteResult(per_expert, tally, winner, tie_broken)
