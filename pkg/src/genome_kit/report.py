"""Render coverage tables as Markdown or JSON."""

from __future__ import annotations

import json

from .cq import CoverageRow, CoverageTable, coverage_from_counts

COLUMNS = ("Questions By", "Questions", "Repetition", "Unique questions", "Answered", "% Answered", "Unanswered")


def _row(cells) -> str:
    return "| " + " | ".join(str(c) for c in cells) + " |"


def _line(row: CoverageRow, label: str | None = None) -> str:
    cells = row.cells()
    if label is not None:
        cells[0] = label
    cells[5] = f"{row.pct_answered:.4f}"
    return _row(cells)


def render_markdown(table: CoverageTable) -> str:
    lines = [_row(COLUMNS), _row(["---"] * len(COLUMNS))]
    lines += [_line(r) for r in table.rows]
    lines.append(_line(table.total))
    if table.descriptive_count:
        lines.append(_line(table.descriptive))
    lines.append(_line(table.considered))
    return "\n".join(lines) + "\n"


def render_json(table: CoverageTable) -> str:
    return json.dumps(table.to_dict(), indent=2) + "\n"


def render_report(table: CoverageTable, format: str = "markdown") -> str:
    if format == "markdown":
        return render_markdown(table)
    if format == "json":
        return render_json(table)
    raise ValueError(f"unknown report format {format!r}")


def parse_json_report(text: str) -> CoverageTable:
    return CoverageTable.from_dict(json.loads(text))


def empty_table() -> CoverageTable:
    return coverage_from_counts([], 0)
