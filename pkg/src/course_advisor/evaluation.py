"""Exact-match accuracy over labeled instances, and report rendering."""

from __future__ import annotations

from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Decimal
from typing import Sequence

from .compiler import RuleSet, expand_row, extract_rules, build_tree
from .engine import course_scores
from .errors import EmptyDataset, EmptyInput, UnknownCourse, ValidationError
from .model import (
    CourseSetQuestion,
    NominalQuestion,
    Questionnaire,
    ScoreQuestion,
    VolunteerProfile,
    validate_profile,
)
from .voting import common_schema, suggest_ensemble

CENT = Decimal("0.01")


@dataclass(frozen=True)
class LabeledInstance:
    profile: VolunteerProfile
    label: str
    separable: bool = False


@dataclass(frozen=True)
class InstanceResult:
    label: str
    winner: str
    correct: bool


@dataclass(frozen=True)
class EvaluationReport:
    total: int
    correct: int
    accuracy_percent: Decimal
    per_instance: tuple[InstanceResult, ...] = ()


@dataclass(frozen=True)
class Summary:
    rows: tuple[tuple[str, Decimal], ...]
    mean: Decimal


def percent(correct: int, total: int) -> Decimal:
    """100 * correct / total, rounded half-even to two places."""
    if total <= 0:
        raise EmptyDataset("accuracy of an empty dataset is undefined")
    return (Decimal(100 * correct) / Decimal(total)).quantize(CENT, rounding=ROUND_HALF_EVEN)


def mean_percent(values: Sequence[Decimal]) -> Decimal:
    if not values:
        raise EmptyInput("nothing to average")
    total = sum((Decimal(v) for v in values), Decimal(0))
    return (total / len(values)).quantize(CENT, rounding=ROUND_HALF_EVEN)


def evaluate(kbs: Sequence[RuleSet], data: Sequence[LabeledInstance]) -> EvaluationReport:
    if not data:
        raise EmptyDataset("dataset has no instances")
    schema = common_schema(kbs)
    results = []
    for i, inst in enumerate(data):
        try:
            if inst.label not in schema.courses:
                raise UnknownCourse(f"label {inst.label!r} is not a course")
            profile, _ = validate_profile(inst.profile, schema, "strict")
        except ValidationError as exc:
            raise type(exc)(f"instance {i}: {exc.message}", exc.span) from exc
        winner = suggest_ensemble(kbs, profile).winner
        results.append(InstanceResult(inst.label, winner, winner == inst.label))
    correct = sum(r.correct for r in results)
    return EvaluationReport(len(results), correct, percent(correct, len(results)), tuple(results))


def summarize(reports: Sequence[tuple[str, EvaluationReport]]) -> Summary:
    if not reports:
        raise EmptyInput("no reports to summarize")
    rows = tuple((label, r.accuracy_percent) for label, r in reports)
    return Summary(rows, mean_percent([acc for _, acc in rows]))


def synthesize_exact_dataset(q: Questionnaire) -> list[LabeledInstance]:
    """One perfectly matching profile per single-valued row expansion.

    An instance is separable when its own course is the only one whose best
    rule is fully satisfied.
    """
    schema = q.schema
    rules = extract_rules(build_tree(q)) if q.rows else None
    out = []
    for course, cells in q.rows.items():
        for k, values in enumerate(expand_row(cells, schema), start=1):
            answers, scores, taught = {}, {}, set()
            for question, value in zip(schema.questions, values):
                if isinstance(question, NominalQuestion):
                    answers[question.name] = value
                elif isinstance(question, ScoreQuestion):
                    scores[course] = max(scores.get(course, value), value)
                elif isinstance(question, CourseSetQuestion):
                    taught |= value
            profile = VolunteerProfile(f"{course}-{k}", answers, scores, frozenset(taught))
            table = course_scores(rules, profile)
            full = [c for c, s in table.items() if s == schema.arity]
            out.append(LabeledInstance(profile, course, full == [course]))
    return out


def report_line(label: str, report: EvaluationReport) -> str:
    return f"{label}\t{report.total}\t{report.correct}\t{report.accuracy_percent}"


def summary_line(summary: Summary) -> str:
    return f"mean\t-\t-\t{summary.mean}"


def render_text(reports: Sequence[tuple[str, EvaluationReport]], summary: Summary | None = None) -> str:
    """Aligned plain-text table: one row per dataset, optional mean row."""
    header = ("dataset", "total", "correct", "accuracy")
    rows = [(label, str(r.total), str(r.correct), str(r.accuracy_percent)) for label, r in reports]
    if summary is not None:
        rows.append(("mean", "", "", str(summary.mean)))
    widths = [max(len(row[i]) for row in [header, *rows]) for i in range(4)]

    def fmt(row):
        cells = (c.ljust(w) if i == 0 else c.rjust(w) for i, (c, w) in enumerate(zip(row, widths)))
        return "  ".join(cells).rstrip()

    return "\n".join([fmt(header), *map(fmt, rows)]) + "\n"
