"""Loading of qpulse record CSVs: header + float columns, empty field = NaN."""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np


class FigureDataError(ValueError):
    """Input CSV missing, empty, or lacking a required column."""


@dataclass(frozen=True)
class CsvData:
    path: str
    columns: dict

    def __contains__(self, name):
        return name in self.columns

    def __getitem__(self, name):
        if name not in self.columns:
            raise FigureDataError(f"{self.path}: no column {name!r}")
        return self.columns[name]

    @property
    def names(self):
        return list(self.columns)

    @property
    def n_rows(self):
        first = next(iter(self.columns.values()))
        return first.size


def load_csv(path):
    """Parse a record CSV; empty fields become NaN (undefined sentinels)."""
    try:
        with open(path, "r", encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            try:
                header = next(reader)
            except StopIteration:
                raise FigureDataError(f"{path}: file is empty") from None
            rows = [row for row in reader if row]
    except OSError as exc:
        raise FigureDataError(f"cannot read {path}: {exc}") from exc
    if not header or any(not name for name in header):
        raise FigureDataError(f"{path}: malformed header")
    if not rows:
        raise FigureDataError(f"{path}: no data rows")
    data = np.full((len(rows), len(header)), np.nan)
    for i, row in enumerate(rows):
        if len(row) != len(header):
            raise FigureDataError(f"{path}: row {i + 2} has {len(row)} fields, "
                                  f"header has {len(header)}")
        for j, field in enumerate(row):
            if field != "":
                data[i, j] = float(field)
    columns = {name: data[:, j].copy() for j, name in enumerate(header)}
    return CsvData(path=str(path), columns=columns)
