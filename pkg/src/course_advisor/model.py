"""Domain types: schemas, questionnaires, volunteer profiles, rules.

Everything here is immutable once validated. Cells of a questionnaire row
are stored per question kind:

* nominal question  -> tuple of alternative labels (1..n, ordered)
* score question    -> a single int threshold
* course-set question -> frozenset of course ids
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from typing import Literal, Mapping, Union

from .errors import (
    ArityMismatch,
    BadScoreRange,
    DuplicateAlternative,
    DuplicateCourse,
    DuplicateQuestion,
    EmptyDomain,
    UnknownCourse,
    UnknownLabel,
    UnknownQuestion,
    ValidationError,
)

IDENT_RE = re.compile(r"[A-Za-z0-9_][A-Za-z0-9_.\-]*\Z")

# Roster token for "no answer"; never a legal domain label.
NONE_TOKEN = "Non"

# Scores and thresholds must fit comfortably in int32 for the batch scorer.
SCORE_LIMIT = 10**9

Mode = Literal["strict", "lenient"]


class InvalidIdentifier(ValidationError):
    pass


def check_ident(value: object, what: str) -> str:
    if not isinstance(value, str) or not IDENT_RE.match(value):
        raise InvalidIdentifier(f"invalid {what} identifier {value!r}")
    return value


@dataclass(frozen=True)
class NominalQuestion:
    name: str
    domain: tuple[str, ...]


@dataclass(frozen=True)
class ScoreQuestion:
    """The lecturer's score on the course being taught, at least a threshold."""

    name: str
    min: int
    max: int


@dataclass(frozen=True)
class CourseSetQuestion:
    name: str


Question = Union[NominalQuestion, ScoreQuestion, CourseSetQuestion]
Cell = Union[tuple, int, frozenset]


@dataclass(frozen=True)
class QuestionnaireSchema:
    department: str
    courses: tuple[str, ...]
    questions: tuple[Question, ...]

    @property
    def arity(self) -> int:
        return len(self.questions)

    def question(self, name: str) -> Question:
        for q in self.questions:
            if q.name == name:
                return q
        raise UnknownQuestion(f"no question named {name!r}")

    @property
    def nominal_questions(self) -> tuple[NominalQuestion, ...]:
        return tuple(q for q in self.questions if isinstance(q, NominalQuestion))

    def course_index(self, course: str) -> int:
        return self.courses.index(course)


@dataclass(frozen=True)
class Questionnaire:
    """One expert's table: a row of cells per course, in schema course order."""

    schema: QuestionnaireSchema
    expert_id: str
    rows: Mapping[str, tuple[Cell, ...]]

    def restricted(self, courses) -> "Questionnaire":
        keep = set(courses)
        return replace(self, rows={c: r for c, r in self.rows.items() if c in keep})


@dataclass(frozen=True)
class VolunteerProfile:
    name: str
    answers: Mapping[str, str | None]
    scores: Mapping[str, int] = field(default_factory=dict)
    taught: frozenset[str] = frozenset()


@dataclass(frozen=True)
class NominalEquals:
    question: str
    label: str


@dataclass(frozen=True)
class ScoreAtLeast:
    course: str
    threshold: int


@dataclass(frozen=True)
class TaughtSuperset:
    required: frozenset[str]


Antecedent = Union[NominalEquals, ScoreAtLeast, TaughtSuperset]


@dataclass(frozen=True)
class Rule:
    """Antecedents in question order and the recommended course.

    ``origin`` is (expert id, 1-based rule index) and does not take part in
    equality, so rules compare by meaning.
    """

    antecedents: tuple[Antecedent, ...]
    posterior: str
    origin: tuple[str, int] = field(default=("", 0), compare=False)


@dataclass(frozen=True)
class Suggestion:
    expert_id: str
    course_scores: Mapping[str, int]
    chosen: str
    tied_with: tuple[str, ...] = ()


def validate_schema(schema: QuestionnaireSchema) -> QuestionnaireSchema:
    dept = schema.department
    if not isinstance(dept, str) or not dept.strip():
        raise EmptyDomain("department must be nonempty text")
    if dept != dept.strip() or "\n" in dept or "\r" in dept:
        raise ValidationError("department must be a single trimmed line")
    if not schema.courses:
        raise EmptyDomain("schema declares no courses")
    seen: set[str] = set()
    for c in schema.courses:
        check_ident(c, "course")
        if c in seen:
            raise DuplicateCourse(f"duplicate course {c!r}")
        seen.add(c)
    if not schema.questions:
        raise EmptyDomain("schema declares no questions")
    names: set[str] = set()
    for q in schema.questions:
        check_ident(q.name, "question")
        if q.name in names:
            raise DuplicateQuestion(f"duplicate question {q.name!r}")
        names.add(q.name)
        if isinstance(q, NominalQuestion):
            validate_domain(q)
        elif isinstance(q, ScoreQuestion):
            if not (_is_int(q.min) and _is_int(q.max)) or q.min >= q.max or max(
                abs(q.min), abs(q.max)
            ) > SCORE_LIMIT:
                raise BadScoreRange(
                    f"question {q.name!r}: score range {q.min}..{q.max} needs min < max"
                )
        elif not isinstance(q, CourseSetQuestion):
            raise ValidationError(f"unsupported question kind {type(q).__name__}")
    return schema


def validate_domain(q: NominalQuestion) -> None:
    if not q.domain:
        raise EmptyDomain(f"question {q.name!r} has an empty domain")
    labels: set[str] = set()
    for label in q.domain:
        check_ident(label, "label")
        if label == NONE_TOKEN:
            raise InvalidIdentifier(f"{NONE_TOKEN!r} is reserved for a missing answer")
        if label in labels:
            raise DuplicateAlternative(f"question {q.name!r}: duplicate label {label!r}")
        labels.add(label)


def _is_int(v: object) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


def validate_cell(cell: Cell, question: Question, schema: QuestionnaireSchema) -> Cell:
    """Check one row cell against its question; return it in canonical form."""
    if isinstance(question, NominalQuestion):
        if isinstance(cell, str):
            cell = (cell,)
        if not isinstance(cell, tuple) or not cell:
            raise EmptyDomain(f"question {question.name!r}: cell needs at least one label")
        if len(set(cell)) != len(cell):
            raise DuplicateAlternative(f"question {question.name!r}: repeated alternative")
        for label in cell:
            if label not in question.domain:
                raise UnknownLabel(f"question {question.name!r}: unknown label {label!r}")
        return cell
    if isinstance(question, ScoreQuestion):
        if not _is_int(cell):
            raise ValidationError(f"question {question.name!r}: score cell must be an integer")
        if not question.min <= cell <= question.max:
            raise BadScoreRange(
                f"question {question.name!r}: {cell} outside {question.min}..{question.max}"
            )
        return cell
    cell = frozenset(cell)
    if not cell:
        raise EmptyDomain(f"question {question.name!r}: course set must be nonempty")
    for c in sorted(cell):
        if c not in schema.courses:
            raise UnknownCourse(f"question {question.name!r}: unknown course {c!r}")
    return cell


def validate_row(course: str, cells, schema: QuestionnaireSchema) -> tuple[Cell, ...]:
    if course not in schema.courses:
        raise UnknownCourse(f"row for unknown course {course!r}")
    cells = tuple(cells)
    if len(cells) != schema.arity:
        raise ArityMismatch(
            f"row {course!r} has {len(cells)} cells, schema has {schema.arity} questions"
        )
    return tuple(validate_cell(c, q, schema) for c, q in zip(cells, schema.questions))


def validate_questionnaire(q: Questionnaire) -> Questionnaire:
    schema = validate_schema(q.schema)
    check_ident(q.expert_id, "expert")
    rows = {}
    for course, cells in q.rows.items():
        rows[course] = validate_row(course, cells, schema)
    ordered = {c: rows[c] for c in schema.courses if c in rows}
    return Questionnaire(schema=schema, expert_id=q.expert_id, rows=ordered)


def validate_profile(
    profile: VolunteerProfile, schema: QuestionnaireSchema, mode: Mode = "strict"
) -> tuple[VolunteerProfile, list[str]]:
    """Check a profile against the schema universe.

    Strict mode raises on any unknown question, label or course. Lenient
    mode drops the offending entry (an unknown label becomes ``None``) and
    reports one warning per drop. Missing nominal answers become ``None``.
    """
    if mode not in ("strict", "lenient"):
        raise ValueError(f"unknown validation mode {mode!r}")
    strict = mode == "strict"
    warnings: list[str] = []
    nominal = {q.name: q for q in schema.nominal_questions}

    def reject(exc: ValidationError) -> None:
        if strict:
            raise exc
        warnings.append(f"{profile.name}: {exc.message}; dropped")

    for key in profile.answers:
        if key not in nominal:
            reject(UnknownQuestion(f"unknown nominal question {key!r}"))
    answers: dict[str, str | None] = {}
    for name, q in nominal.items():
        label = profile.answers.get(name)
        if label is not None and label not in q.domain:
            reject(UnknownLabel(f"question {name!r}: unknown label {label!r}"))
            label = None
        answers[name] = label

    scores: dict[str, int] = {}
    for course, value in profile.scores.items():
        if not _is_int(value) or abs(value) > SCORE_LIMIT:
            raise ValidationError(f"{profile.name}: score for {course!r} must be a bounded integer")
        if course not in schema.courses:
            reject(UnknownCourse(f"unknown course {course!r} in scores"))
            continue
        scores[course] = value
    # canonical key order keeps validation idempotent and output stable
    scores = {c: scores[c] for c in schema.courses if c in scores}

    taught = set()
    for course in sorted(profile.taught):
        if course not in schema.courses:
            reject(UnknownCourse(f"unknown course {course!r} in taught"))
            continue
        taught.add(course)

    out = VolunteerProfile(
        name=profile.name, answers=answers, scores=scores, taught=frozenset(taught)
    )
    return out, warnings


def alternatives(cell: Cell, question: Question) -> tuple:
    """Single answer values a cell expands to."""
    if isinstance(question, NominalQuestion):
        return cell
    return (cell,)


def antecedent_for(question: Question, value, posterior: str) -> Antecedent:
    """Build the antecedent testing one expanded cell value."""
    if isinstance(question, NominalQuestion):
        return NominalEquals(question.name, value)
    if isinstance(question, ScoreQuestion):
        return ScoreAtLeast(posterior, value)
    return TaughtSuperset(frozenset(value))
