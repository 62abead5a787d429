"""Figures for evaluation reports."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .evaluation import EvaluationReport, Summary  # noqa: E402

_STABLE_METADATA = {
    "png": {"Software": None},
    "pdf": {"CreationDate": None},
    "svg": {"Date": None},
}


def accuracy_figure(
    reports: Sequence[tuple[str, EvaluationReport]],
    summary: Summary | None = None,
    width: float = 6.0,
):
    """Bar chart of accuracy per dataset, with the mean as a dashed line."""
    labels = [label for label, _ in reports]
    values = [float(r.accuracy_percent) for _, r in reports]
    fig, ax = plt.subplots(figsize=(width, width * 0.618), facecolor="w")
    bars = ax.bar(range(len(values)), values, color="0.55", edgecolor="black", width=0.6)
    for bar, value in zip(bars, values):
        ax.text(bar.get_x() + bar.get_width() / 2, value + 1, f"{value:.2f}", ha="center", fontsize=9)
    if summary is not None:
        ax.axhline(float(summary.mean), color="black", ls="--", lw=1)
        ax.text(len(values) - 0.5, float(summary.mean) + 1, f"mean {summary.mean}", ha="right", fontsize=9)
    ax.set_xticks(range(len(values)))
    ax.set_xticklabels(labels)
    ax.set_ylim(0, 105)
    ax.set_ylabel("accuracy (%)")
    ax.spines["top"].set_visible(False)
    ax.spines["right"].set_visible(False)
    fig.tight_layout()
    return fig


def save_accuracy_figure(
    path: str | Path,
    reports: Sequence[tuple[str, EvaluationReport]],
    summary: Summary | None = None,
) -> Path:
    path = Path(path)
    fig = accuracy_figure(reports, summary)
    # no timestamps, so reruns give byte-identical files
    metadata = _STABLE_METADATA.get(path.suffix.lower().lstrip("."), {})
    fig.savefig(path, dpi=120, metadata=metadata)
    plt.close(fig)
    return path
