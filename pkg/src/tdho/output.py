"""Deterministic delimited output.

All CSV files share one dialect: optional '#'-prefixed metadata comment
lines, a fixed header row, '.' decimal separator, 17 significant digits
(round-trip safe). Re-running the same computation rewrites byte-identical
files.
"""

from __future__ import annotations


def format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, int):
        return str(value)
    return f"{float(value):.17g}"


def write_csv(path, header, rows, meta=()) -> int:
    """Write rows (iterables of cells) under a header; returns row count."""
    count = 0
    with open(path, "w", newline="") as fh:
        for line in meta:
            fh.write(f"# {line}\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(format_cell(cell) for cell in row) + "\n")
            count += 1
    return count
