"""Render audit reports and test results as markdown, CSV, and JSON.

JSON is lossless (round-trips to the exact report); markdown and CSV are
fixed-precision projections: ratios at 3 decimals, chi-square statistics at
2, p-values at 3 with "<.001" below threshold.
"""

from __future__ import annotations

import csv
import io
import json
from typing import Sequence

from .audit import AuditReport, ReportRow
from .errors import ValidationError
from .stats import Chi2Result

__all__ = [
    "render_audit",
    "render_chi2",
    "report_from_json",
    "report_filename",
    "fmt_ratio",
    "fmt_statistic",
    "fmt_p",
]

FORMATS = ("markdown", "csv", "json")


def fmt_ratio(value: float | None) -> str:
    if value is None:
        return ""
    text = f"{value:.3f}"
    return text[1:] if text.startswith("0.") else text


def fmt_statistic(value: float) -> str:
    return f"{value:.2f}"


def fmt_p(value: float) -> str:
    if value < 0.001:
        return "<.001"
    text = f"{value:.3f}"
    return text[1:] if text.startswith("0.") else text


def _label(gender: str) -> str:
    return gender.capitalize()


def _report_dict(report: AuditReport) -> dict:
    matched, total, fraction = report.dict_share
    return {
        "corpus": report.corpus_name,
        "dictionary": report.dictionary_name,
        "profile": report.profile_name,
        "genders": list(report.genders),
        "dict_share": {
            "matched_terms": matched,
            "total_terms": total,
            "fraction": fraction,
        },
        "total_instances": report.total_instances,
        "exclusions": list(report.exclusions),
        "rows": [
            {
                "partition": row.partition,
                "frequencies": dict(row.frequencies),
                "ratios": dict(row.ratios) if row.ratios is not None else None,
                "total": row.total,
            }
            for row in report.rows
        ],
    }


def report_from_json(data: bytes | str | dict) -> AuditReport:
    """Inverse of the JSON rendering."""
    if isinstance(data, (bytes, str)):
        data = json.loads(data)
    share = data["dict_share"]
    return AuditReport(
        corpus_name=data["corpus"],
        dictionary_name=data["dictionary"],
        profile_name=data["profile"],
        genders=tuple(data["genders"]),
        dict_share=(share["matched_terms"], share["total_terms"], share["fraction"]),
        rows=tuple(
            ReportRow(
                row["partition"],
                dict(row["frequencies"]),
                dict(row["ratios"]) if row["ratios"] is not None else None,
                row["total"],
            )
            for row in data["rows"]
        ),
        total_instances=data["total_instances"],
        exclusions=tuple(data["exclusions"]),
    )


def _audit_markdown(report: AuditReport) -> str:
    matched, total, fraction = report.dict_share
    genders = list(report.genders)
    out = io.StringIO()
    out.write(
        f"# {report.corpus_name} x {report.dictionary_name} ({report.profile_name})\n\n"
    )
    out.write(
        f"Dictionary share: {matched}/{total} ({fraction:.1%}). "
        f"Total instances: {report.total_instances}.\n"
    )
    if report.exclusions:
        out.write(f"Excluded tokens: {', '.join(report.exclusions)}.\n")
    out.write("\n")
    header = (
        ["Partition"]
        + [f"{_label(g)} Freq." for g in genders]
        + [f"{_label(g)} Ratio" for g in genders]
    )
    out.write("| " + " | ".join(header) + " |\n")
    out.write("|" + "---|" * len(header) + "\n")
    for row in report.rows:
        cells = [row.partition]
        cells += [str(row.frequencies[g]) for g in genders]
        cells += [fmt_ratio(row.ratios[g] if row.ratios else None) for g in genders]
        out.write("| " + " | ".join(cells) + " |\n")
    return out.getvalue()


def _audit_csv(report: AuditReport) -> str:
    genders = list(report.genders)
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(
        ["partition"]
        + [f"{g}_freq" for g in genders]
        + [f"{g}_ratio" for g in genders]
        + ["total"]
    )
    for row in report.rows:
        writer.writerow(
            [row.partition]
            + [row.frequencies[g] for g in genders]
            + [fmt_ratio(row.ratios[g] if row.ratios else None) for g in genders]
            + [row.total]
        )
    return out.getvalue()


def render_audit(report: AuditReport, fmt: str = "markdown") -> bytes:
    """Render an audit report; identical inputs give identical bytes."""
    if fmt == "json":
        text = json.dumps(_report_dict(report), ensure_ascii=False, indent=2) + "\n"
    elif fmt == "markdown":
        text = _audit_markdown(report)
    elif fmt == "csv":
        text = _audit_csv(report)
    else:
        raise ValidationError(f"unknown report format {fmt!r}")
    return text.encode("utf-8")


def render_chi2(
    results: Sequence[tuple[str, Chi2Result]], fmt: str = "markdown"
) -> bytes:
    """Render labelled chi-square results, one row per test."""
    if fmt == "json":
        payload = [
            {
                "label": label,
                "statistic": res.statistic,
                "df": res.df,
                "p": res.p,
                "corrected": res.corrected,
            }
            for label, res in results
        ]
        return (json.dumps(payload, ensure_ascii=False, indent=2) + "\n").encode("utf-8")
    if fmt == "csv":
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["label", "statistic", "df", "p"])
        for label, res in results:
            writer.writerow([label, fmt_statistic(res.statistic), res.df, fmt_p(res.p)])
        return out.getvalue().encode("utf-8")
    if fmt == "markdown":
        out = io.StringIO()
        out.write("| Test | Chi2 | df | p |\n|---|---|---|---|\n")
        for label, res in results:
            out.write(
                f"| {label} | {fmt_statistic(res.statistic)} | {res.df} "
                f"| {fmt_p(res.p)} |\n"
            )
        return out.getvalue().encode("utf-8")
    raise ValidationError(f"unknown report format {fmt!r}")


def report_filename(corpus: str, dictionary: str, profile: str, ext: str) -> str:
    """Canonical output name: <corpus>_<dictionary>_<profile>.<ext>."""

    def safe(part: str) -> str:
        return "".join(ch if ch.isalnum() or ch in "_-." else "-" for ch in part)

    return f"{safe(corpus)}_{safe(dictionary)}_{safe(profile)}.{ext}"
