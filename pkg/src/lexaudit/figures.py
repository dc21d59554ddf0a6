"""Figure rendering for audit reports and chi-square results.

Writes PNG files next to the delimited report output. Uses the Agg backend
so rendering works headless.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .audit import AuditReport
from .stats import Chi2Result

__all__ = ["audit_figure", "chi2_figure"]

_COLORS = {
    "masculine": "#4c72b0",
    "feminine": "#dd8452",
    "neutral": "#55a868",
    "neo": "#c44e52",
    "other": "#8172b3",
}


def audit_figure(report: AuditReport, path: str | Path) -> Path:
    """Grouped bar chart of gender frequencies per partition."""
    path = Path(path)
    genders = list(report.genders)
    partitions = [row.partition for row in report.rows]
    width = 0.8 / max(1, len(genders))
    fig, ax = plt.subplots(figsize=(1.8 + 1.4 * len(partitions), 4.0))
    for gi, gender in enumerate(genders):
        xs = [i + gi * width for i in range(len(partitions))]
        ys = [row.frequencies[gender] for row in report.rows]
        ax.bar(xs, ys, width=width, label=gender.capitalize(),
               color=_COLORS.get(gender))
    ax.set_xticks([i + width * (len(genders) - 1) / 2 for i in range(len(partitions))])
    ax.set_xticklabels(partitions)
    ax.set_ylabel("Frequency")
    ax.set_title(
        f"{report.corpus_name} x {report.dictionary_name} ({report.profile_name})"
    )
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def chi2_figure(results: Sequence[tuple[str, Chi2Result]], path: str | Path) -> Path:
    """Horizontal bar chart of chi-square statistics."""
    path = Path(path)
    labels = [label for label, _ in results]
    values = [res.statistic for _, res in results]
    fig, ax = plt.subplots(figsize=(7, 0.9 + 0.5 * max(1, len(labels))))
    ax.barh(range(len(labels)), values, color="#4c72b0")
    ax.set_yticks(range(len(labels)))
    ax.set_yticklabels(labels)
    ax.invert_yaxis()
    ax.set_xlabel("Chi-square statistic")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path
