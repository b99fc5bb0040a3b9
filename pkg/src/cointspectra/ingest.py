"""CSV ingestion: rows are time points ascending, columns are variables.

A single header row of labels is detected by its first row failing numeric
conversion.  Anything else irregular (ragged rows, non-numeric cells, too few
rows) is a CsvFormatError naming the offending row and column; there is no
missing-data handling by design.
"""

from __future__ import annotations

import csv
import io
from pathlib import Path

import numpy as np

from .cca import TimeSeriesPanel

__all__ = ["CsvFormatError", "ingest_csv", "ingest_csv_text"]


class CsvFormatError(ValueError):
    """The input file is not a rectangular numeric panel."""


def ingest_csv(path: str | Path) -> TimeSeriesPanel:
    """Parse the file at ``path`` into a levels panel."""
    text = Path(path).read_text()
    try:
        return ingest_csv_text(text)
    except CsvFormatError as err:
        raise CsvFormatError(f"{path}: {err}") from None


def ingest_csv_text(text: str) -> TimeSeriesPanel:
    """Parse CSV content into a levels panel (p = columns, T + 1 = rows)."""
    rows = [row for row in csv.reader(io.StringIO(text)) if any(c.strip() for c in row)]
    if not rows:
        raise CsvFormatError("no data rows found")

    names = None
    offset = 0
    first = rows[0]
    if not _all_numeric(first):
        names = tuple(c.strip() for c in first)
        rows = rows[1:]
        offset = 1
        if not rows:
            raise CsvFormatError("only a header row found, no data")

    p = len(rows[0])
    if p < 1:
        raise CsvFormatError("rows contain no columns")
    if names is not None and len(names) != p:
        raise CsvFormatError(
            f"header has {len(names)} labels but data rows have {p} columns"
        )

    data = np.empty((len(rows), p))
    for i, row in enumerate(rows):
        if len(row) != p:
            raise CsvFormatError(
                f"row {i + 1 + offset} has {len(row)} cells, expected {p} (ragged input)"
            )
        for j, cell in enumerate(row):
            try:
                data[i, j] = float(cell)
            except ValueError:
                raise CsvFormatError(
                    f"row {i + 1 + offset}, column {j + 1}: non-numeric cell {cell.strip()!r}"
                ) from None

    if len(rows) < p + 3:
        raise CsvFormatError(
            f"need at least p + 3 = {p + 3} data rows for a {p}-variable panel, "
            f"got {len(rows)}"
        )
    return TimeSeriesPanel(levels=data.T, names=names)


def _all_numeric(row: list[str]) -> bool:
    for cell in row:
        try:
            float(cell)
        except ValueError:
            return False
    return True
