from decimal import Decimal

from course_advisor.evaluation import EvaluationReport, summarize
from course_advisor.plotting import accuracy_figure, save_accuracy_figure


def _reports():
    return [
        ("cs", EvaluationReport(30, 25, Decimal("83.33"))),
        ("ee", EvaluationReport(30, 19, Decimal("63.33"))),
        ("civil", EvaluationReport(30, 27, Decimal("90.00"))),
    ]


def test_bars_follow_reports():
    fig = accuracy_figure(_reports(), summarize(_reports()))
    ax = fig.axes[0]
    assert [round(p.get_height(), 2) for p in ax.patches] == [83.33, 63.33, 90.0]
    assert [t.get_text() for t in ax.get_xticklabels()] == ["cs", "ee", "civil"]
    assert [round(l.get_ydata()[0], 2) for l in ax.lines] == [78.89]


def test_formats(tmp_path):
    for suffix, magic in ((".png", b"\x89PNG"), (".pdf", b"%PDF"), (".svg", b"<?xml")):
        path = save_accuracy_figure(tmp_path / f"acc{suffix}", _reports())
        assert path.read_bytes().startswith(magic)
