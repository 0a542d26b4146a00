"""CSV ingestion and the two bundled survival datasets."""

from __future__ import annotations

import csv
import io
from importlib import resources
from pathlib import Path

import numpy as np

from .distributions import CensoredSample
from .errors import DataError

__all__ = ["ingest", "ingest_text", "emit", "load_bundled", "BUNDLED_DATASETS"]

BUNDLED_DATASETS = ("leukemia_survival", "remission_times")


def _parse_row(row: list[str], lineno: int) -> tuple[float, int]:
    if len(row) != 2:
        raise DataError(f"line {lineno}: expected 'time,delta', got {','.join(row)!r}")
    try:
        time = float(row[0])
    except ValueError:
        raise DataError(f"line {lineno}: time {row[0]!r} is not a number") from None
    if not (time > 0 and np.isfinite(time)):
        raise DataError(f"line {lineno}: time must be a positive real, got {row[0]!r}")
    if row[1].strip() not in ("0", "1"):
        raise DataError(f"line {lineno}: delta must be 0 or 1, got {row[1]!r}")
    return time, int(row[1])


def ingest_text(text: str, source: str = "<string>") -> CensoredSample:
    """Parse 'time,delta' CSV content; '#' lines are comments and a single
    header row is allowed.  Any malformed row aborts with its line number."""
    times: list[float] = []
    deltas: list[int] = []
    reader = csv.reader(io.StringIO(text))
    header_allowed = True
    for lineno, row in enumerate(reader, start=1):
        if not row or (row[0].lstrip().startswith("#")):
            continue
        stripped = [cell.strip() for cell in row]
        if header_allowed:
            header_allowed = False
            try:
                float(stripped[0])
            except ValueError:
                continue  # header row
        time, delta = _parse_row(stripped, lineno)
        times.append(time)
        deltas.append(delta)
    if not times:
        raise DataError(f"{source}: no data rows found")
    return CensoredSample(np.array(times), np.array(deltas))


def ingest(path: str | Path) -> CensoredSample:
    """Read a censored sample from a CSV file."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from None
    return ingest_text(text, source=str(path))


def emit(sample: CensoredSample, path: str | Path) -> None:
    """Write a sample as 'time,delta' CSV; full float precision, so
    ingest(emit(sample)) reproduces the sample exactly."""
    lines = ["time,delta"]
    lines += [f"{float(t)!r},{int(d)}" for t, d in zip(sample.times, sample.deltas)]
    Path(path).write_text("\n".join(lines) + "\n")


def load_bundled(name: str) -> CensoredSample:
    """Load one of the packaged datasets by name."""
    if name not in BUNDLED_DATASETS:
        raise DataError(f"unknown bundled dataset {name!r}; available: {BUNDLED_DATASETS}")
    text = resources.files("weibullgof.data").joinpath(f"{name}.csv").read_text()
    return ingest_text(text, source=name)
