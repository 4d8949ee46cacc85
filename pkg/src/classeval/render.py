"""Table, CSV, and JSON renderings of metric reports.

JSON payloads are schema-versioned with stable key order, so re-reading a
payload and re-rendering it reproduces identical bytes. The percent scale
multiplies every metric scalar by exactly 100; n, c_eff, and entropy_gold
are structural and stay unscaled.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from typing import Mapping

from .metrics import METRIC_NAMES, PER_CLASS_METRIC_NAMES, MetricReport

__all__ = [
    "SCHEMA_VERSION",
    "OUTPUT_FORMATS",
    "RenderedReport",
    "scale_report",
    "report_to_dict",
    "report_from_dict",
    "render_evaluation",
    "render_comparison",
    "slice_heading",
]

SCHEMA_VERSION = 1
OUTPUT_FORMATS = ("table", "csv", "json")


@dataclass(frozen=True)
class RenderedReport:
    format: str
    scale: str  # "unit" or "percent"
    payload: str


def scale_report(report: MetricReport, factor: float) -> MetricReport:
    """Report with every metric scalar multiplied by `factor`."""
    return MetricReport(
        n=report.n,
        c_eff=report.c_eff,
        entropy_gold=report.entropy_gold,
        labels=report.labels,
        values={name: value * factor for name, value in report.values.items()},
        per_class={name: tuple(v * factor for v in values)
                   for name, values in report.per_class.items()},
        warnings=report.warnings,
    )


def report_to_dict(report: MetricReport) -> dict:
    return {
        "n": report.n,
        "c_eff": report.c_eff,
        "entropy_gold": report.entropy_gold,
        "labels": list(report.labels),
        "metrics": dict(report.values),
        "per_class": {name: list(values) for name, values in report.per_class.items()},
        "warnings": list(report.warnings),
    }


def report_from_dict(payload: Mapping) -> MetricReport:
    return MetricReport(
        n=int(payload["n"]),
        c_eff=int(payload["c_eff"]),
        entropy_gold=float(payload["entropy_gold"]),
        labels=tuple(payload.get("labels", ())),
        values={name: float(value) for name, value in payload["metrics"].items()},
        per_class={name: tuple(float(v) for v in values)
                   for name, values in payload["per_class"].items()},
        warnings=tuple(payload.get("warnings", ())),
    )


def slice_heading(name: str, report: MetricReport) -> str:
    """Row label in the `name (count) [entropy]` annotation style."""
    return f"{name} ({report.n}) [{report.entropy_gold:.2f}]"


def _fmt(value: float, percent: bool) -> str:
    # values arrive already scaled; percent only shortens the display
    return f"{value:.1f}" if percent else f"{value:.4f}"


def _table(rows: list[list[str]]) -> str:
    widths = [max(len(row[col]) for row in rows) for col in range(len(rows[0]))]
    lines = []
    for row in rows:
        cells = [row[0].ljust(widths[0])]
        cells += [cell.rjust(width) for cell, width in zip(row[1:], widths[1:])]
        lines.append("  ".join(cells).rstrip())
    return "\n".join(lines)


def _single_table(report: MetricReport, percent: bool) -> str:
    head = (f"n: {report.n}    classes: {len(report.labels)}    c_eff: {report.c_eff}"
            f"    entropy_gold: {report.entropy_gold:.4f} bits")
    metric_rows = [["metric", "value"]]
    metric_rows += [[name, _fmt(report.values[name], percent)] for name in report.values]
    class_rows = [["class", *PER_CLASS_METRIC_NAMES]]
    for i, label in enumerate(report.labels):
        class_rows.append([label] + [_fmt(report.per_class[name][i], percent)
                                     for name in PER_CLASS_METRIC_NAMES])
    return head + "\n\n" + _table(metric_rows) + "\n\n" + _table(class_rows) + "\n"


def _grid_table(sections: Mapping[str, MetricReport], percent: bool,
                label_header: str = "slice") -> str:
    rows = [[label_header, *METRIC_NAMES]]
    for heading, report in sections.items():
        rows.append([heading] + [_fmt(report.values[name], percent) for name in METRIC_NAMES])
    return _table(rows) + "\n"


def _csv_rows(sections: Mapping[str, MetricReport], key_column: str) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow([key_column, "n", "c_eff", "entropy_gold", *METRIC_NAMES])
    for key, report in sections.items():
        writer.writerow([key, report.n, report.c_eff, report.entropy_gold]
                        + [report.values[name] for name in METRIC_NAMES])
    return buffer.getvalue()


def _json_payload(document: dict) -> str:
    return json.dumps(document, indent=2) + "\n"


def render_evaluation(overall: MetricReport, groups: Mapping[str, MetricReport] | None = None,
                      fmt: str = "table", percent: bool = False) -> RenderedReport:
    """Render the overall report plus optional per-group reports."""
    if fmt not in OUTPUT_FORMATS:
        raise ValueError(f"unknown output format: {fmt!r}")
    factor = 100.0 if percent else 1.0
    scaled_overall = scale_report(overall, factor) if percent else overall
    scaled_groups = {key: (scale_report(report, factor) if percent else report)
                     for key, report in (groups or {}).items()}

    if fmt == "json":
        if groups is None:
            document = {"version": SCHEMA_VERSION, **report_to_dict(scaled_overall)}
        else:
            document = {
                "version": SCHEMA_VERSION,
                "overall": report_to_dict(scaled_overall),
                "groups": {key: report_to_dict(report) for key, report in scaled_groups.items()},
            }
        payload = _json_payload(document)
    elif fmt == "csv":
        sections = {"overall": scaled_overall, **scaled_groups}
        payload = _csv_rows(sections, "group")
    else:
        if groups is None:
            payload = _single_table(scaled_overall, percent=percent)
        else:
            sections = {slice_heading("overall", scaled_overall): scaled_overall}
            for key, report in scaled_groups.items():
                sections[slice_heading(key, report)] = report
            payload = _grid_table(sections, percent=percent)
    return RenderedReport(fmt, "percent" if percent else "unit", payload)


def render_comparison(system: MetricReport, baseline: MetricReport, delta: MetricReport,
                      fmt: str = "table", percent: bool = False) -> RenderedReport:
    """Render the three-section system / baseline / delta comparison."""
    if fmt not in OUTPUT_FORMATS:
        raise ValueError(f"unknown output format: {fmt!r}")
    factor = 100.0 if percent else 1.0
    sections = {
        "system": scale_report(system, factor) if percent else system,
        "baseline": scale_report(baseline, factor) if percent else baseline,
        "delta": scale_report(delta, factor) if percent else delta,
    }
    if fmt == "json":
        document = {"version": SCHEMA_VERSION}
        document.update({key: report_to_dict(report) for key, report in sections.items()})
        payload = _json_payload(document)
    elif fmt == "csv":
        payload = _csv_rows(sections, "section")
    else:
        rows = [["metric", "system", "baseline", "delta"]]
        for name in METRIC_NAMES:
            rows.append([name] + [_fmt(sections[key].values[name], percent)
                                  for key in ("system", "baseline", "delta")])
        head = (f"system: n={system.n}  baseline: n={baseline.n}"
                f"  (values are {'percent' if percent else 'unit'} scale)")
        payload = head + "\n\n" + _table(rows) + "\n"
    return RenderedReport(fmt, "percent" if percent else "unit", payload)
