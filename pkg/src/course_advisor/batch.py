"""Vectorised scoring and voting for many profiles at once.

Same semantics as :func:`course_advisor.voting.suggest_ensemble`, computed
with numpy: every distinct antecedent is evaluated once per profile batch,
rule scores are sums of gathered antecedent columns, and per-course maxima
come from a segmented reduction over rules grouped by (expert, course).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .compiler import RuleSet
from .errors import EmptyRuleSet
from .model import NominalEquals, ScoreAtLeast, TaughtSuperset, VolunteerProfile
from .voting import common_schema

MISSING = np.iinfo(np.int32).min


@dataclass(frozen=True)
class BatchVotes:
    courses: tuple[str, ...]
    table: np.ndarray  # (profiles, experts, courses); -1 where an expert has no rule
    chosen: np.ndarray  # (profiles, experts) course index
    tally: np.ndarray  # (profiles, courses)
    winner: np.ndarray  # (profiles,) course index
    tie_broken: np.ndarray  # (profiles,) bool

    def winners(self) -> list[str]:
        return [self.courses[i] for i in self.winner]


class BatchScorer:
    def __init__(self, kbs: Sequence[RuleSet]):
        schema = common_schema(kbs)
        self.schema = schema
        self.courses = schema.courses
        self.n_experts = len(kbs)
        nominal = schema.nominal_questions
        self._nominal_col = {q.name: i for i, q in enumerate(nominal)}
        self._label_code = {q.name: {l: k for k, l in enumerate(q.domain)} for q in nominal}
        cidx = {c: i for i, c in enumerate(self.courses)}

        distinct: dict = {}
        keyed = []
        for e, rs in enumerate(kbs):
            if not rs.rules:
                raise EmptyRuleSet(f"rule set of expert {rs.expert_id!r} is empty")
            for rule in rs.rules:
                ids = [distinct.setdefault(a, len(distinct)) for a in rule.antecedents]
                keyed.append((e, cidx[rule.posterior], ids))
        keyed.sort(key=lambda t: (t[0], t[1]))
        self._antecedents = list(distinct)
        self._rule_ants = np.array([ids for _, _, ids in keyed], dtype=np.intp)
        groups = np.array([(e, c) for e, c, _ in keyed], dtype=np.intp)
        change = np.ones(len(groups), dtype=bool)
        change[1:] = np.any(groups[1:] != groups[:-1], axis=1)
        self._starts = np.flatnonzero(change)
        self._group_expert = groups[self._starts, 0]
        self._group_course = groups[self._starts, 1]

    def encode(self, profiles: Sequence[VolunteerProfile]):
        n, c = len(profiles), len(self.courses)
        codes = np.full((n, len(self._nominal_col)), -1, dtype=np.int32)
        scores = np.full((n, c), MISSING, dtype=np.int32)
        taught = np.zeros((n, c), dtype=bool)
        cidx = {course: i for i, course in enumerate(self.courses)}
        for i, p in enumerate(profiles):
            for q, col in self._nominal_col.items():
                label = p.answers.get(q)
                if label is not None:
                    codes[i, col] = self._label_code[q].get(label, -1)
            for course, v in p.scores.items():
                if course in cidx:
                    scores[i, cidx[course]] = v
            for course in p.taught:
                if course in cidx:
                    taught[i, cidx[course]] = True
        return codes, scores, taught

    def antecedent_matrix(self, codes, scores, taught) -> np.ndarray:
        cidx = {course: i for i, course in enumerate(self.courses)}
        out = np.empty((codes.shape[0], len(self._antecedents)), dtype=np.int16)
        for j, a in enumerate(self._antecedents):
            if isinstance(a, NominalEquals):
                code = self._label_code[a.question].get(a.label, -2)
                out[:, j] = codes[:, self._nominal_col[a.question]] == code
            elif isinstance(a, ScoreAtLeast):
                out[:, j] = scores[:, cidx[a.course]] >= a.threshold
            elif isinstance(a, TaughtSuperset):
                cols = [cidx[c] for c in a.required]
                out[:, j] = taught[:, cols].all(axis=1)
            else:
                raise TypeError(f"not an antecedent: {a!r}")
        return out

    def rule_scores(self, profiles: Sequence[VolunteerProfile]) -> np.ndarray:
        """(profiles, rules) satisfied-antecedent counts, rules in (expert, course) order."""
        sat = self.antecedent_matrix(*self.encode(profiles))
        total = np.zeros((sat.shape[0], self._rule_ants.shape[0]), dtype=np.int16)
        for d in range(self._rule_ants.shape[1]):
            total += sat[:, self._rule_ants[:, d]]
        return total

    def vote(self, profiles: Sequence[VolunteerProfile]) -> BatchVotes:
        n, c = len(profiles), len(self.courses)
        if n == 0:
            empty = np.zeros((0,), dtype=np.intp)
            return BatchVotes(
                self.courses,
                np.zeros((0, self.n_experts, c), dtype=np.int16),
                np.zeros((0, self.n_experts), dtype=np.intp),
                np.zeros((0, c), dtype=np.intp),
                empty,
                np.zeros((0,), dtype=bool),
            )
        rs = self.rule_scores(profiles)
        gmax = np.maximum.reduceat(rs, self._starts, axis=1)
        table = np.full((n, self.n_experts, c), -1, dtype=np.int16)
        table[:, self._group_expert, self._group_course] = gmax
        chosen = np.argmax(table, axis=2)
        tally = (chosen[:, :, None] == np.arange(c)).sum(axis=1)
        summed = np.clip(table, 0, None).sum(axis=1, dtype=np.int64)
        leaders = tally == tally.max(axis=1, keepdims=True)
        winner = np.argmax(np.where(leaders, summed, -1), axis=1)
        return BatchVotes(self.courses, table, chosen, tally, winner, leaders.sum(axis=1) > 1)
