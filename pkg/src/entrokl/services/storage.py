"""File input and output for densities, point sets and reports.

Density documents are JSON (read through the YAML loader, of which JSON is a
subset). Point sets and per-rep records are comma-separated with LF line
endings and 17 significant digits. Reports are indented JSON.
"""

from __future__ import annotations

import csv
import json
import logging
import math
import sys
from collections.abc import Iterable, Iterator
from contextlib import contextmanager
from pathlib import Path
from typing import TextIO

import numpy as np
import yaml

from entrokl.models import RepRecord, Report, SampleSet
from entrokl.services.densities import AnalyticDensity, parse_density_spec
from entrokl.services.exceptions import DensitySpecError, PointsFileError

logger = logging.getLogger(__name__)

STDOUT = "-"
_FLOAT_FORMAT = "%.17g"


def load_density_spec(path: Path) -> AnalyticDensity:
    """Load and validate a density document.

    Args:
        path: JSON file with a "family" field and the family's parameters

    Returns:
        AnalyticDensity for the document

    Raises:
        DensitySpecError: If the file cannot be read or parsed, or fails validation
    """
    try:
        with open(path, encoding="utf-8") as f:
            data = yaml.safe_load(f)
    except yaml.YAMLError as e:
        raise DensitySpecError(f"Failed to parse density document {path}: {e}") from e
    except OSError as e:
        raise DensitySpecError(f"Failed to read density document {path}: {e}") from e

    if not isinstance(data, dict):
        raise DensitySpecError(f"Density document {path} must be a JSON object")
    return parse_density_spec(data)


def _parse_row(row: list[str], line: int) -> list[float]:
    values = []
    for cell in row:
        try:
            value = float(cell.strip())
        except ValueError as e:
            raise PointsFileError(f"not a number: {cell.strip()!r}", line=line) from e
        if not math.isfinite(value):
            raise PointsFileError(f"non-finite coordinate {cell.strip()!r}", line=line)
        values.append(value)
    return values


def _is_numeric(row: list[str]) -> bool:
    try:
        [float(cell.strip()) for cell in row]
    except ValueError:
        return False
    return True


def read_points_csv(path: Path) -> SampleSet:
    """Read a points file: one point per row, optional non-numeric header row.

    Args:
        path: CSV file with d ≥ 1 comma-separated numeric columns

    Returns:
        SampleSet tagged with the file name

    Raises:
        PointsFileError: On unreadable files, ragged or non-numeric rows, or
            fewer than 2 data rows; the message names the offending line
    """
    try:
        with open(path, encoding="utf-8", newline="") as f:
            rows = list(csv.reader(f))
    except OSError as e:
        raise PointsFileError(f"Failed to read points file {path}: {e}") from e
    except csv.Error as e:
        raise PointsFileError(f"Malformed CSV in {path}: {e}") from e

    while rows and not rows[-1]:
        rows.pop()

    points: list[list[float]] = []
    width = None
    for index, row in enumerate(rows):
        line = index + 1
        if index == 0 and row and not _is_numeric(row):
            logger.debug(f"Treating first row of {path} as a header: {row}")
            continue
        if not row:
            raise PointsFileError("empty row", line=line)
        values = _parse_row(row, line)
        if width is None:
            width = len(values)
        elif len(values) != width:
            raise PointsFileError(f"expected {width} columns, got {len(values)}", line=line)
        points.append(values)

    if len(points) < 2:
        raise PointsFileError(f"{path} has {len(points)} data rows; at least 2 are needed")
    return SampleSet(points=np.array(points), source_tag=str(path))


def write_points_csv(points: np.ndarray, out: TextIO) -> None:
    """Write an (n, d) array as CSV rows with 17 significant digits."""
    for row in np.atleast_2d(points):
        out.write(",".join(_FLOAT_FORMAT % value for value in row) + "\n")


def write_records_csv(records: Iterable[RepRecord], out: TextIO) -> None:
    """Write per-rep records with the columns n, rep, h_n, seed."""
    out.write("n,rep,h_n,seed\n")
    for record in records:
        out.write(f"{record.n},{record.rep},{_FLOAT_FORMAT % record.h_n},{record.seed}\n")


def render_report(report: Report) -> str:
    """Serialize a report as indented JSON followed by a newline.

    Floats use the shortest representation that round-trips exactly.
    """
    return json.dumps(report.model_dump(mode="json"), indent=2, allow_nan=False) + "\n"


@contextmanager
def open_output(target: str | Path | None) -> Iterator[TextIO]:
    """Open an output target for writing with LF line endings.

    Args:
        target: File path, or "-" / None for standard output

    Yields:
        Writable text stream
    """
    if target is None or str(target) == STDOUT:
        yield sys.stdout
        sys.stdout.flush()
        return
    with open(target, "w", encoding="utf-8", newline="\n") as f:
        yield f
