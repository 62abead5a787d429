"""Rule-based advisor that matches volunteer lecturers to courses.

Expert questionnaires compile into decision trees and flat rule sets; a
volunteer is scored by counting satisfied antecedents, each expert picks its
best course, and experts are combined by plurality vote.
"""

from .compiler import DecisionTree, RuleSet, build_tree, compile_kb, extract_rules
from .engine import course_scores, eval_antecedent, score_rule, suggest
from .evaluation import (
    EvaluationReport,
    LabeledInstance,
    evaluate,
    summarize,
    synthesize_exact_dataset,
)
from .formats import (
    export_rules_text,
    load_kb,
    parse_dataset,
    parse_kb,
    parse_questionnaire,
    parse_roster,
    serialize_kb,
    serialize_questionnaire,
    serialize_roster,
)
from .model import (
    CourseSetQuestion,
    NominalEquals,
    NominalQuestion,
    Questionnaire,
    QuestionnaireSchema,
    Rule,
    ScoreAtLeast,
    ScoreQuestion,
    Suggestion,
    TaughtSuperset,
    VolunteerProfile,
    validate_profile,
    validate_questionnaire,
    validate_schema,
)
from .voting import VoteResult, suggest_ensemble

__version__ = "0.1.0"
