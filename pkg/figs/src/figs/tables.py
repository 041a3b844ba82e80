"""CSV ingestion for the run outputs: comma-separated, one header row,
optional leading '#' metadata lines."""
from __future__ import annotations

import csv
from pathlib import Path


class SchemaError(Exception):
    """Input table violates the documented schema; the message names the
    missing or malformed column."""


def read_table(path, required=()) -> dict:
    """Parse a CSV into {column: list}; numeric cells become floats.

    Empty cells stay as None.  Raises SchemaError when the table is empty or
    a required column is missing.
    """
    path = Path(path)
    rows = []
    with path.open(newline="") as fh:
        for record in csv.reader(line for line in fh if not line.startswith("#")):
            if record:
                rows.append(record)
    if not rows:
        raise SchemaError(f"{path}: empty table")
    header, data_rows = rows[0], rows[1:]
    for col in required:
        if col not in header:
            raise SchemaError(f"{path}: missing column '{col}'")
    if not data_rows:
        raise SchemaError(f"{path}: no data rows")
    columns = {name: [] for name in header}
    for record in data_rows:
        if len(record) != len(header):
            raise SchemaError(f"{path}: row width {len(record)} != header width {len(header)}")
        for name, cell in zip(header, record):
            columns[name].append(_coerce(cell))
    return columns


def _coerce(cell: str):
    if cell == "":
        return None
    try:
        return float(cell)
    except ValueError:
        return cell
