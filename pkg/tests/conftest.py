from importlib.resources import files

import pytest

from course_advisor.compiler import build_tree, extract_rules
from course_advisor.model import (
    CourseSetQuestion,
    NominalQuestion,
    Questionnaire,
    QuestionnaireSchema,
    ScoreQuestion,
    VolunteerProfile,
)

DEGREES = ("AI", "Structure", "Software", "AD")

TABLE1_SCHEMA = QuestionnaireSchema(
    department="Computer Science",
    courses=("AI", "DB", "NS", "CN", "AD"),
    questions=(
        NominalQuestion("bsc", ("Software", "Hardware")),
        NominalQuestion("msc", DEGREES),
        NominalQuestion("phd", DEGREES),
        ScoreQuestion("score", 10, 20),
        CourseSetQuestion("taught"),
    ),
)

TABLE1_ROWS = {
    "AI": (("Software",), ("AI",), ("AI",), 18, frozenset({"AI", "AD"})),
    "DB": (("Software",), ("Software",), ("Software",), 15, frozenset({"DB"})),
    "NS": (("Hardware",), ("Structure",), ("Structure",), 15, frozenset({"NS", "CN"})),
    "CN": (("Hardware",), ("Structure",), ("Structure",), 15, frozenset({"CN"})),
    "AD": (("Software",), ("AD", "AI"), ("AD",), 18, frozenset({"AD"})),
}


@pytest.fixture
def schema():
    return TABLE1_SCHEMA


@pytest.fixture
def table1():
    return Questionnaire(TABLE1_SCHEMA, "cs1", dict(TABLE1_ROWS))


@pytest.fixture
def table1_text():
    return files("course_advisor").joinpath("data/computer_science.q").read_text()


@pytest.fixture
def rules3(table1):
    """The three-rule set printed with the worked example (AI, DB, NS rows)."""
    return extract_rules(build_tree(table1.restricted(["AI", "DB", "NS"])))


@pytest.fixture
def f1():
    return VolunteerProfile(
        "F1",
        {"bsc": "Hardware", "msc": "AI", "phd": "AI"},
        {"AI": 19, "DB": 20},
        frozenset({"NS", "CN"}),
    )
