"""Exception hierarchy and source locations for diagnostics."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class SourceSpan:
    """Location of an offending token.

    Lines and columns are 1-based; ``end_col`` is exclusive, so a
    one-character token at column 3 has ``col=3, end_col=4``.
    """

    file: str
    line: int
    col: int
    end_col: int

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.col}-{self.end_col}"


class AdvisorError(Exception):
    """Base class; carries an optional span."""

    def __init__(self, message: str, span: SourceSpan | None = None) -> None:
        self.message = message
        self.span = span
        super().__init__(f"{span}: {message}" if span is not None else message)

    def at(self, span: SourceSpan) -> "AdvisorError":
        """Return a copy of this error located at ``span``."""
        return type(self)(self.message, span)


class KBSyntaxError(AdvisorError):
    """Malformed input text."""


class ValidationError(AdvisorError):
    """Well-formed input that violates a model invariant."""


class DuplicateCourse(ValidationError):
    pass


class DuplicateQuestion(ValidationError):
    pass


class DuplicateAlternative(ValidationError):
    pass


class EmptyDomain(ValidationError):
    pass


class BadScoreRange(ValidationError):
    pass


class UnknownLabel(ValidationError):
    pass


class UnknownCourse(ValidationError):
    pass


class UnknownQuestion(ValidationError):
    pass


class ArityMismatch(ValidationError):
    pass


class DuplicateRow(ValidationError):
    pass


class EmptyQuestionnaire(ValidationError):
    pass


class SchemaMismatch(ValidationError):
    pass


class EmptyEnsemble(ValidationError):
    pass


class EmptyRuleSet(ValidationError):
    pass


class EmptyDataset(ValidationError):
    pass


class EmptyInput(ValidationError):
    pass
