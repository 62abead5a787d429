"""Text formats: questionnaires, rosters/datasets, and rule-set (KB) files.

All formats are UTF-8, line oriented, ``#`` starts a comment line, and an
optional leading ``format = 1`` line is accepted (and always emitted).

Questionnaire::

    format = 1
    department = Computer Science
    expert = cs1
    question bsc nominal Software|Hardware
    question score score 10..20
    question taught courseset
    course AI
    row AI : Software ; 18 ; AI+AD

Roster (comma separated, header first; ``label`` column optional)::

    name,bsc,scores,taught,label
    F1,Hardware,AI:19+DB:20,NS+CN,AI

KB file: the schema directives of a questionnaire, then one section per
expert made of ``expert =``, ``provenance =`` and ``RULE`` lines.
"""

from __future__ import annotations

import functools
import re
from dataclasses import dataclass, field
from typing import Sequence

from .compiler import RuleSet, compile_kb
from .errors import (
    AdvisorError,
    ArityMismatch,
    BadScoreRange,
    DuplicateAlternative,
    DuplicateCourse,
    DuplicateQuestion,
    DuplicateRow,
    EmptyDomain,
    KBSyntaxError,
    SchemaMismatch,
    SourceSpan,
    UnknownCourse,
    UnknownLabel,
    UnknownQuestion,
    ValidationError,
)
from .evaluation import LabeledInstance
from .model import (
    IDENT_RE,
    NONE_TOKEN,
    SCORE_LIMIT,
    CourseSetQuestion,
    Mode,
    NominalEquals,
    NominalQuestion,
    Questionnaire,
    QuestionnaireSchema,
    Rule,
    ScoreAtLeast,
    ScoreQuestion,
    TaughtSuperset,
    VolunteerProfile,
    validate_profile,
    validate_questionnaire,
    validate_schema,
)

FORMAT_VERSION = "1"

_TOKEN_RE = re.compile(r">=|[A-Za-z0-9_.\-]+|[=:;/+|(),&]|\S")
_INT_RE = re.compile(r"-?[0-9]+\Z")
_RANGE_RE = re.compile(r"\s*(-?[0-9]+)\s*\.\.\s*(-?[0-9]+)\s*\Z")


@dataclass(frozen=True)
class Token:
    text: str
    col: int
    end: int


@dataclass
class Line:
    file: str
    no: int
    text: str
    tokens: list[Token] = field(default_factory=list)

    def span(self, tok: Token | None = None) -> SourceSpan:
        if tok is not None:
            return SourceSpan(self.file, self.no, tok.col, tok.end)
        if self.tokens:
            return SourceSpan(self.file, self.no, self.tokens[0].col, self.tokens[-1].end)
        return SourceSpan(self.file, self.no, 1, len(self.text) + 1)

    def between(self, first: Token, last: Token) -> SourceSpan:
        return SourceSpan(self.file, self.no, first.col, last.end)

    def eol(self) -> SourceSpan:
        n = len(self.text.rstrip()) + 1
        return SourceSpan(self.file, self.no, n, n + 1)


def _decode(data: str | bytes, file: str) -> str:
    if isinstance(data, str):
        return data
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        head = data[: exc.start]
        line = head.count(b"\n") + 1
        col = exc.start - (head.rfind(b"\n") + 1) + 1
        raise KBSyntaxError("invalid UTF-8", SourceSpan(file, line, col, col + 1)) from None


def _lines(data: str | bytes, file: str) -> tuple[list[Line], SourceSpan]:
    """Split into significant lines; also return an end-of-file span."""
    text = _decode(data, file)
    raw = text.split("\n")
    out = []
    for no, s in enumerate(raw, start=1):
        s = s[:-1] if s.endswith("\r") else s
        stripped = s.strip()
        if not stripped or stripped.startswith("#"):
            continue
        toks = [Token(m.group(), m.start() + 1, m.end() + 1) for m in _TOKEN_RE.finditer(s)]
        out.append(Line(file, no, s, toks))
    last = raw[-1] if raw else ""
    eof = SourceSpan(file, len(raw), len(last) + 1, len(last) + 2)
    return out, eof


class Cursor:
    def __init__(self, line: Line, start: int = 0):
        self.line = line
        self.i = start

    def peek(self) -> Token | None:
        return self.line.tokens[self.i] if self.i < len(self.line.tokens) else None

    def next(self, what: str) -> Token:
        tok = self.peek()
        if tok is None:
            raise KBSyntaxError(f"expected {what}, found end of line", self.line.eol())
        self.i += 1
        return tok

    def expect(self, text: str) -> Token:
        tok = self.next(repr(text))
        if tok.text != text:
            raise KBSyntaxError(f"expected {text!r}, found {tok.text!r}", self.line.span(tok))
        return tok

    def ident(self, what: str) -> Token:
        tok = self.next(what)
        if not IDENT_RE.match(tok.text):
            raise KBSyntaxError(f"expected {what}, found {tok.text!r}", self.line.span(tok))
        return tok

    def integer(self, what: str) -> tuple[Token, int]:
        tok = self.next(what)
        if not _INT_RE.match(tok.text):
            raise KBSyntaxError(f"expected {what}, found {tok.text!r}", self.line.span(tok))
        value = int(tok.text)
        if abs(value) > SCORE_LIMIT:
            raise BadScoreRange(f"{value} exceeds the score limit", self.line.span(tok))
        return tok, value

    def rest(self) -> str:
        """Raw text after the current token position."""
        tok = self.peek()
        return "" if tok is None else self.line.text[tok.col - 1 :]

    def done(self) -> None:
        tok = self.peek()
        if tok is not None:
            raise KBSyntaxError(f"unexpected {tok.text!r}", self.line.span(tok))

    def separated(self, sep: str, what: str) -> list[Token]:
        items = [self.ident(what)]
        while (tok := self.peek()) is not None and tok.text == sep:
            self.i += 1
            items.append(self.ident(what))
        return items


class _SchemaBuilder:
    """Collects department/question/course directives with their spans."""

    def __init__(self, eof: SourceSpan):
        self.eof = eof
        self.department: str | None = None
        self.courses: list[str] = []
        self.questions: list = []

    def handle(self, cur: Cursor, keyword: Token) -> bool:
        line = cur.line
        if keyword.text == "department":
            if self.department is not None:
                raise KBSyntaxError("department given twice", line.span(keyword))
            cur.expect("=")
            text = cur.rest().strip()
            if not text:
                raise KBSyntaxError("department text is empty", line.eol())
            self.department = text
            return True
        if keyword.text == "course":
            tok = cur.ident("course id")
            cur.done()
            if tok.text in self.courses:
                raise DuplicateCourse(f"duplicate course {tok.text!r}", line.span(tok))
            self.courses.append(tok.text)
            return True
        if keyword.text == "question":
            name = cur.ident("question name")
            if any(q.name == name.text for q in self.questions):
                raise DuplicateQuestion(f"duplicate question {name.text!r}", line.span(name))
            kind = cur.ident("question kind")
            if kind.text == "nominal":
                labels = cur.separated("|", "label")
                cur.done()
                seen: list[str] = []
                for tok in labels:
                    if tok.text == NONE_TOKEN:
                        raise KBSyntaxError(f"{NONE_TOKEN!r} is reserved", line.span(tok))
                    if tok.text in seen:
                        raise DuplicateAlternative(f"duplicate label {tok.text!r}", line.span(tok))
                    seen.append(tok.text)
                self.questions.append(NominalQuestion(name.text, tuple(seen)))
            elif kind.text == "score":
                first = cur.peek()
                m = _RANGE_RE.match(cur.rest())
                if first is None or m is None:
                    raise KBSyntaxError("expected score range <min>..<max>", line.span(first) if first else line.eol())
                span = line.between(first, line.tokens[-1])
                lo, hi = int(m.group(1)), int(m.group(2))
                if lo >= hi or max(abs(lo), abs(hi)) > SCORE_LIMIT:
                    raise BadScoreRange(f"score range {lo}..{hi} needs min < max", span)
                self.questions.append(ScoreQuestion(name.text, lo, hi))
            elif kind.text == "courseset":
                cur.done()
                self.questions.append(CourseSetQuestion(name.text))
            else:
                raise KBSyntaxError(f"unknown question kind {kind.text!r}", line.span(kind))
            return True
        return False

    def finish(self) -> QuestionnaireSchema:
        if self.department is None:
            raise KBSyntaxError("missing 'department =' line", self.eof)
        if not self.courses:
            raise EmptyDomain("no courses declared", self.eof)
        if not self.questions:
            raise EmptyDomain("no questions declared", self.eof)
        schema = QuestionnaireSchema(self.department, tuple(self.courses), tuple(self.questions))
        try:
            return validate_schema(schema)
        except ValidationError as exc:
            raise exc.at(self.eof) from None


def _version(cur: Cursor, index: int) -> None:
    if index != 0:
        raise KBSyntaxError("'format' must be the first line", cur.line.span(cur.line.tokens[0]))
    cur.expect("=")
    tok = cur.next("format version")
    if tok.text != FORMAT_VERSION:
        raise KBSyntaxError(f"unsupported format version {tok.text!r}", cur.line.span(tok))
    cur.done()


def _located(fn):
    """Give any diagnostic raised without a location a file-level span."""

    @functools.wraps(fn)
    def wrapper(data, *args, **kwargs):
        try:
            return fn(data, *args, **kwargs)
        except AdvisorError as exc:
            if exc.span is None:
                raise exc.at(SourceSpan(kwargs.get("filename", "<input>"), 1, 1, 2)) from None
            raise

    return wrapper


# -- questionnaires ---------------------------------------------------------


def _parse_cell(cur: Cursor, toks: list[Token], question, schema) -> object:
    line = cur.line
    sub = Cursor(Line(line.file, line.no, line.text, toks))
    if isinstance(question, NominalQuestion):
        labels = sub.separated("/", "label")
        sub.done()
        seen: list[str] = []
        for tok in labels:
            if tok.text not in question.domain:
                raise UnknownLabel(f"question {question.name!r}: unknown label {tok.text!r}", line.span(tok))
            if tok.text in seen:
                raise DuplicateAlternative(f"repeated alternative {tok.text!r}", line.span(tok))
            seen.append(tok.text)
        return tuple(seen)
    if isinstance(question, ScoreQuestion):
        tok, value = sub.integer("integer score")
        sub.done()
        if not question.min <= value <= question.max:
            raise BadScoreRange(
                f"question {question.name!r}: {value} outside {question.min}..{question.max}",
                line.span(tok),
            )
        return value
    courses = sub.separated("+", "course id")
    sub.done()
    seen = set()
    for tok in courses:
        if tok.text not in schema.courses:
            raise UnknownCourse(f"unknown course {tok.text!r}", line.span(tok))
        if tok.text in seen:
            raise DuplicateAlternative(f"repeated course {tok.text!r}", line.span(tok))
        seen.add(tok.text)
    return frozenset(seen)


def _parse_row(cur: Cursor, keyword: Token, schema: QuestionnaireSchema, rows: dict) -> None:
    line = cur.line
    course = cur.ident("course id")
    if course.text not in schema.courses:
        raise UnknownCourse(f"row for unknown course {course.text!r}", line.span(course))
    if course.text in rows:
        raise DuplicateRow(f"second row for course {course.text!r}", line.span(course))
    colon = cur.expect(":")
    cells: list[list[Token]] = [[]]
    seps = [colon]
    for tok in line.tokens[cur.i :]:
        if tok.text == ";":
            cells.append([])
            seps.append(tok)
        else:
            cells[-1].append(tok)
    if len(cells) != schema.arity:
        raise ArityMismatch(
            f"row {course.text!r} has {len(cells)} cells, schema has {schema.arity} questions",
            line.between(keyword, line.tokens[-1]),
        )
    values = []
    for toks, sep, question in zip(cells, seps, schema.questions):
        if not toks:
            raise KBSyntaxError("empty cell", line.span(sep))
        values.append(_parse_cell(cur, toks, question, schema))
    rows[course.text] = tuple(values)


@_located
def parse_questionnaire(data: str | bytes, filename: str = "<questionnaire>") -> Questionnaire:
    lines, eof = _lines(data, filename)
    builder = _SchemaBuilder(eof)
    expert: str | None = None
    row_lines: list[tuple[Cursor, Token]] = []
    for index, line in enumerate(lines):
        cur = Cursor(line)
        keyword = cur.next("directive")
        if keyword.text == "format":
            _version(cur, index)
        elif keyword.text == "expert":
            if expert is not None:
                raise KBSyntaxError("expert given twice", line.span(keyword))
            cur.expect("=")
            expert = cur.ident("expert id").text
            cur.done()
        elif keyword.text == "row":
            row_lines.append((cur, keyword))
        elif not builder.handle(cur, keyword):
            raise KBSyntaxError(f"unknown directive {keyword.text!r}", line.span(keyword))
    schema = builder.finish()
    if expert is None:
        raise KBSyntaxError("missing 'expert =' line", eof)
    rows: dict = {}
    for cur, keyword in row_lines:
        _parse_row(cur, keyword, schema, rows)
    return validate_questionnaire(Questionnaire(schema, expert, rows))


def _schema_lines(schema: QuestionnaireSchema) -> list[str]:
    out = [f"department = {schema.department}"]
    for q in schema.questions:
        if isinstance(q, NominalQuestion):
            out.append(f"question {q.name} nominal {'|'.join(q.domain)}")
        elif isinstance(q, ScoreQuestion):
            out.append(f"question {q.name} score {q.min}..{q.max}")
        else:
            out.append(f"question {q.name} courseset")
    out.extend(f"course {c}" for c in schema.courses)
    return out


def _course_set(courses, schema: QuestionnaireSchema) -> str:
    return "+".join(c for c in schema.courses if c in courses)


def _cell_text(cell, question, schema) -> str:
    if isinstance(question, NominalQuestion):
        return "/".join(cell)
    if isinstance(question, ScoreQuestion):
        return str(cell)
    return _course_set(cell, schema)


def serialize_questionnaire(q: Questionnaire) -> str:
    schema = q.schema
    lines = [f"format = {FORMAT_VERSION}", _schema_lines(schema)[0], f"expert = {q.expert_id}"]
    lines += _schema_lines(schema)[1:]
    for course in schema.courses:
        if course in q.rows:
            cells = " ; ".join(
                _cell_text(c, qq, schema) for c, qq in zip(q.rows[course], schema.questions)
            )
            lines.append(f"row {course} : {cells}")
    return "\n".join(lines) + "\n"


# -- rosters and datasets ---------------------------------------------------

ROSTER_FIXED = ("name", "scores", "taught")


@dataclass
class Roster:
    profiles: list[VolunteerProfile]
    labels: list[str] | None
    warnings: list[str]


def _fields(line: Line) -> list[tuple[str, int, int]]:
    """Comma-split a record into (stripped text, start col, end col)."""
    out = []
    start = 0
    for part in line.text.split(","):
        lead = len(part) - len(part.lstrip())
        body = part.strip()
        col = start + lead + 1
        out.append((body, col, col + max(len(body), 1)))
        start += len(part) + 1
    return out


def _field_cursor(line: Line, text: str, col: int) -> Cursor:
    toks = [Token(m.group(), col + m.start(), col + m.end()) for m in _TOKEN_RE.finditer(text)]
    return Cursor(Line(line.file, line.no, line.text, toks))


@_located
def parse_roster(
    data: str | bytes,
    schema: QuestionnaireSchema,
    mode: Mode = "strict",
    filename: str = "<roster>",
) -> Roster:
    """Parse volunteer records; in lenient mode unknown labels/courses become warnings."""
    if mode not in ("strict", "lenient"):
        raise ValueError(f"unknown validation mode {mode!r}")
    lines, eof = _lines(data, filename)
    if lines and lines[0].tokens[0].text == "format":
        _version(Cursor(lines[0], 1), 0)
        lines = lines[1:]
    if not lines:
        raise KBSyntaxError("missing header line", eof)
    nominal = {q.name: q for q in schema.nominal_questions}
    header = lines[0]
    columns: list[str] = []
    for text, col, end in _fields(header):
        span = SourceSpan(filename, header.no, col, end)
        if text in columns:
            raise KBSyntaxError(f"duplicate column {text!r}", span)
        if text not in nominal and text not in ROSTER_FIXED and text != "label":
            raise KBSyntaxError(f"unknown column {text!r}", span)
        columns.append(text)
    for required in (*ROSTER_FIXED[:1], *nominal, *ROSTER_FIXED[1:]):
        if required not in columns:
            raise KBSyntaxError(f"header lacks column {required!r}", header.span())
    has_label = "label" in columns

    profiles, labels, warnings = [], [] if has_label else None, []
    for index, line in enumerate(lines[1:]):
        fields = _fields(line)
        if len(fields) != len(columns):
            raise KBSyntaxError(
                f"record {index} has {len(fields)} fields, header has {len(columns)}", line.span()
            )
        rec = _Record(line, index, mode, warnings)
        answers, scores, taught, name, label = {}, {}, set(), "", None
        for column, (text, col, end) in zip(columns, fields):
            span = SourceSpan(filename, line.no, col, end)
            if column == "name":
                if not text:
                    raise KBSyntaxError(f"record {index}: empty name", span)
                name = text
            elif column == "scores":
                scores = rec.scores(text, col, schema)
            elif column == "taught":
                taught = rec.course_list(text, col, schema, "taught")
            elif column == "label":
                cur = _field_cursor(line, text, col)
                tok = cur.ident("course label")
                cur.done()
                if tok.text not in schema.courses:
                    raise UnknownCourse(f"record {index}: unknown label {tok.text!r}", line.span(tok))
                label = tok.text
            else:
                answers[column] = rec.label(text, col, nominal[column])
        profile, _ = validate_profile(
            VolunteerProfile(name, answers, scores, frozenset(taught)), schema, "strict"
        )
        profiles.append(profile)
        if labels is not None:
            labels.append(label)
    return Roster(profiles, labels, warnings)


class _Record:
    def __init__(self, line: Line, index: int, mode: Mode, warnings: list[str]):
        self.line = line
        self.index = index
        self.strict = mode == "strict"
        self.warnings = warnings

    def reject(self, exc: ValidationError) -> None:
        if self.strict:
            raise exc
        self.warnings.append(f"{exc.span}: record {self.index}: {exc.message}; dropped")

    def label(self, text: str, col: int, question: NominalQuestion) -> str | None:
        if text in ("", NONE_TOKEN):
            return None
        cur = _field_cursor(self.line, text, col)
        tok = cur.ident("label")
        cur.done()
        if tok.text not in question.domain:
            self.reject(UnknownLabel(
                f"question {question.name!r}: unknown label {tok.text!r}", self.line.span(tok)
            ))
            return None
        return tok.text

    def course_list(self, text: str, col: int, schema, what: str) -> set[str]:
        if not text:
            return set()
        cur = _field_cursor(self.line, text, col)
        toks = cur.separated("+", "course id")
        cur.done()
        out = set()
        for tok in toks:
            if tok.text in out:
                raise DuplicateCourse(f"course {tok.text!r} repeated in {what}", self.line.span(tok))
            if tok.text not in schema.courses:
                self.reject(UnknownCourse(f"unknown course {tok.text!r} in {what}", self.line.span(tok)))
                continue
            out.add(tok.text)
        return out

    def scores(self, text: str, col: int, schema) -> dict[str, int]:
        if not text:
            return {}
        cur = _field_cursor(self.line, text, col)
        out: dict[str, int] = {}
        seen: set[str] = set()
        while True:
            course = cur.ident("course id")
            cur.expect(":")
            _, value = cur.integer("integer score")
            if course.text in seen:
                raise DuplicateCourse(f"course {course.text!r} scored twice", self.line.span(course))
            seen.add(course.text)
            if course.text not in schema.courses:
                self.reject(UnknownCourse(f"unknown course {course.text!r} in scores", self.line.span(course)))
            else:
                out[course.text] = value
            if cur.peek() is None:
                return out
            cur.expect("+")


def parse_dataset(
    data: str | bytes, schema: QuestionnaireSchema, filename: str = "<dataset>"
) -> list[LabeledInstance]:
    """Strict roster with a mandatory ``label`` column."""
    roster = parse_roster(data, schema, "strict", filename=filename)
    if roster.labels is None:
        lines, eof = _lines(data, filename)
        raise KBSyntaxError("dataset header lacks a 'label' column", eof)
    return [LabeledInstance(p, l) for p, l in zip(roster.profiles, roster.labels)]


def serialize_roster(
    profiles: Sequence[VolunteerProfile],
    schema: QuestionnaireSchema,
    labels: Sequence[str] | None = None,
) -> str:
    nominal = [q.name for q in schema.nominal_questions]
    header = ["name", *nominal, "scores", "taught"] + (["label"] if labels is not None else [])
    lines = [f"format = {FORMAT_VERSION}", ",".join(header)]
    for i, p in enumerate(profiles):
        if not p.name.strip() or p.name != p.name.strip() or any(ch in p.name for ch in ",\n\r"):
            raise ValidationError(f"profile name {p.name!r} is not representable in a roster")
        cells = [p.name]
        cells += [p.answers.get(n) or NONE_TOKEN for n in nominal]
        cells.append("+".join(f"{c}:{p.scores[c]}" for c in schema.courses if c in p.scores))
        cells.append(_course_set(p.taught, schema))
        if labels is not None:
            cells.append(labels[i])
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


# -- rule export and KB files -----------------------------------------------


def _antecedent_text(a, schema: QuestionnaireSchema) -> str:
    if isinstance(a, NominalEquals):
        return f"{a.question}={a.label}"
    if isinstance(a, ScoreAtLeast):
        return f"score({a.course})>={a.threshold}"
    return f"taught>={_course_set(a.required, schema)}"


def rule_text(index: int, rule: Rule, schema: QuestionnaireSchema) -> str:
    body = " & ".join(_antecedent_text(a, schema) for a in rule.antecedents)
    return f"RULE {index}: IF {body} THEN course={rule.posterior}"


def export_rules_text(rs: RuleSet) -> str:
    return "".join(rule_text(i, r, rs.schema) + "\n" for i, r in enumerate(rs.rules, start=1))


def serialize_kb(kbs: Sequence[RuleSet]) -> str:
    if not kbs:
        raise ValidationError("no rule sets to serialize")
    schema = kbs[0].schema
    if any(rs.schema != schema for rs in kbs):
        raise SchemaMismatch("rule sets do not share one schema")
    ids = [rs.expert_id for rs in kbs]
    if len(set(ids)) != len(ids):
        raise ValidationError(f"expert ids must be distinct in one KB file: {ids}")
    parts = [f"format = {FORMAT_VERSION}\n", "\n".join(_schema_lines(schema)) + "\n"]
    for rs in kbs:
        parts.append(f"expert = {rs.expert_id}\n")
        if rs.provenance:
            parts.append(f"provenance = {rs.provenance}\n")
        parts.append(export_rules_text(rs))
    return "".join(parts)


def _parse_antecedent(cur: Cursor, question, schema: QuestionnaireSchema):
    line = cur.line
    if isinstance(question, NominalQuestion):
        name = cur.ident("question name")
        if name.text != question.name:
            raise UnknownQuestion(f"expected question {question.name!r}, found {name.text!r}", line.span(name))
        cur.expect("=")
        label = cur.ident("label")
        if label.text not in question.domain:
            raise UnknownLabel(f"question {question.name!r}: unknown label {label.text!r}", line.span(label))
        return NominalEquals(question.name, label.text), None
    if isinstance(question, ScoreQuestion):
        cur.expect("score")
        cur.expect("(")
        course = cur.ident("course id")
        if course.text not in schema.courses:
            raise UnknownCourse(f"unknown course {course.text!r}", line.span(course))
        cur.expect(")")
        cur.expect(">=")
        tok, value = cur.integer("integer threshold")
        if not question.min <= value <= question.max:
            raise BadScoreRange(f"{value} outside {question.min}..{question.max}", line.span(tok))
        return ScoreAtLeast(course.text, value), course
    cur.expect("taught")
    cur.expect(">=")
    toks = cur.separated("+", "course id")
    seen = set()
    for tok in toks:
        if tok.text not in schema.courses:
            raise UnknownCourse(f"unknown course {tok.text!r}", line.span(tok))
        if tok.text in seen:
            raise DuplicateAlternative(f"repeated course {tok.text!r}", line.span(tok))
        seen.add(tok.text)
    return TaughtSuperset(frozenset(seen)), None


def _parse_rule(cur: Cursor, schema: QuestionnaireSchema, expert: str, position: int) -> Rule:
    line = cur.line
    tok, index = cur.integer("rule number")
    if index != position:
        raise KBSyntaxError(f"expected rule number {position}, found {index}", line.span(tok))
    cur.expect(":")
    cur.expect("IF")
    ants, score_courses = [], []
    for d, question in enumerate(schema.questions):
        if d:
            cur.expect("&")
        ant, course_tok = _parse_antecedent(cur, question, schema)
        ants.append(ant)
        if course_tok is not None:
            score_courses.append(course_tok)
    nxt = cur.peek()
    if nxt is not None and nxt.text == "&":
        raise ArityMismatch(f"rule has more than {schema.arity} antecedents", line.span(nxt))
    cur.expect("THEN")
    cur.expect("course")
    cur.expect("=")
    posterior = cur.ident("course id")
    cur.done()
    if posterior.text not in schema.courses:
        raise UnknownCourse(f"unknown course {posterior.text!r}", line.span(posterior))
    for ctok in score_courses:
        if ctok.text != posterior.text:
            raise ValidationError(
                f"score antecedent must test the posterior course {posterior.text!r}", line.span(ctok)
            )
    return Rule(tuple(ants), posterior.text, origin=(expert, index))


@_located
def parse_kb(data: str | bytes, filename: str = "<kb>") -> list[RuleSet]:
    lines, eof = _lines(data, filename)
    builder = _SchemaBuilder(eof)
    schema: QuestionnaireSchema | None = None
    sections: list[dict] = []
    seen_experts: set[str] = set()
    for index, line in enumerate(lines):
        cur = Cursor(line)
        keyword = cur.next("directive")
        if keyword.text == "format":
            _version(cur, index)
        elif keyword.text == "expert":
            if schema is None:
                schema = builder.finish()
            cur.expect("=")
            tok = cur.ident("expert id")
            cur.done()
            if tok.text in seen_experts:
                raise KBSyntaxError(f"expert {tok.text!r} appears twice", line.span(tok))
            seen_experts.add(tok.text)
            sections.append({"expert": tok.text, "provenance": "", "rules": [], "line": line})
        elif keyword.text == "provenance":
            if not sections or sections[-1]["rules"] or sections[-1]["provenance"]:
                raise KBSyntaxError("provenance must directly follow 'expert ='", line.span(keyword))
            cur.expect("=")
            text = cur.rest().strip()
            if not text or any(ch.isspace() for ch in text):
                raise KBSyntaxError("bad provenance value", line.eol())
            sections[-1]["provenance"] = text
        elif keyword.text == "RULE":
            if not sections:
                raise KBSyntaxError("RULE before any 'expert =' line", line.span(keyword))
            sec = sections[-1]
            sec["rules"].append(_parse_rule(cur, schema, sec["expert"], len(sec["rules"]) + 1))
        elif schema is None and builder.handle(cur, keyword):
            pass
        else:
            raise KBSyntaxError(f"unexpected directive {keyword.text!r}", line.span(keyword))
    if schema is None:
        builder.finish()
        raise KBSyntaxError("KB file has no 'expert =' section", eof)
    out = []
    for sec in sections:
        if not sec["rules"]:
            raise KBSyntaxError(f"expert {sec['expert']!r} has no rules", sec["line"].span())
        out.append(RuleSet(tuple(sec["rules"]), sec["expert"], schema, sec["provenance"]))
    return out


def is_questionnaire_text(data: str | bytes) -> bool:
    """KB files carry RULE lines; questionnaire files never do."""
    text = data.decode("utf-8", "replace") if isinstance(data, bytes) else data
    return not any(line.lstrip().startswith("RULE") for line in text.split("\n"))


def load_kb(data: str | bytes, filename: str = "<kb>") -> list[RuleSet]:
    """Read a KB file, or compile a questionnaire file on the fly."""
    if is_questionnaire_text(data):
        return compile_kb([parse_questionnaire(data, filename=filename)])
    return parse_kb(data, filename=filename)
