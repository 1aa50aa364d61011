"""Strict CSV helpers shared by the data-file readers.

All readers require a header row, accept scientific notation, and reject
NaN/Inf and non-numeric junk with file/line diagnostics.
"""

from __future__ import annotations

import csv
import math
import re
from pathlib import Path

from .errors import CsvError

# "label[unit]" header fields, e.g. "t[s]" or "pitch_rate[rad/s]"
_UNIT_RE = re.compile(r"^(?P<label>[^\[\]]*?)\s*(?:\[(?P<unit>[^\[\]]*)\])?$")


def split_unit(field: str) -> tuple[str, str]:
    """Split a header field ``label[unit]`` into ``(label, unit)``."""
    m = _UNIT_RE.match(field.strip())
    if m is None:
        return field.strip(), ""
    return m.group("label").strip(), (m.group("unit") or "").strip()


def join_unit(label: str, unit: str) -> str:
    return f"{label}[{unit}]" if unit else label


def fmt_number(value) -> str:
    """Shortest exact decimal form of a float (round-trips losslessly)."""
    return repr(float(value))


def parse_number(text: str, path: Path, line_no: int, column: str) -> float:
    """Parse one numeric cell; NaN/Inf and garbage are rejected."""
    try:
        value = float(text)
    except ValueError:
        raise CsvError(f"{path}:{line_no}: column {column!r}: not a number: {text!r}") from None
    if not math.isfinite(value):
        raise CsvError(f"{path}:{line_no}: column {column!r}: non-finite value {text!r}")
    return value


def read_rows(path: str | Path, min_columns: int = 1) -> tuple[list[str], list[tuple[int, list[str]]]]:
    """Read a CSV file into (header_fields, [(line_no, fields), ...]).

    Blank lines are skipped; every data row must have as many fields as the
    header.
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise CsvError(f"cannot read {path}: {exc}") from exc
    reader = csv.reader(text.splitlines())
    header: list[str] | None = None
    rows: list[tuple[int, list[str]]] = []
    for line_no, fields in enumerate(reader, start=1):
        if not fields or all(not f.strip() for f in fields):
            continue
        fields = [f.strip() for f in fields]
        if header is None:
            header = fields
            if len(header) < min_columns:
                raise CsvError(
                    f"{path}:1: header must have at least {min_columns} columns, got {len(header)}"
                )
            continue
        if len(fields) != len(header):
            raise CsvError(
                f"{path}:{line_no}: expected {len(header)} fields, got {len(fields)}"
            )
        rows.append((line_no, fields))
    if header is None:
        raise CsvError(f"{path}: empty file (a header row is required)")
    if not rows:
        raise CsvError(f"{path}: no data rows")
    return header, rows


def write_rows(path: str | Path, header: list[str], rows) -> None:
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)
