"""Panel data model, validation, and CSV ingestion.

A panel is an N x T matrix of observations: N series observed on a common
time grid of length T. Storage is row-major by series so per-series passes
over time are cache-contiguous. Panels are immutable after construction and
safe to share across workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import EmptyInputError, NonNumericCellError, NonRectangularError

__all__ = ["Panel", "SeriesMeans", "load_csv", "write_csv", "csv_text", "demean_rows"]

_LAYOUTS = ("columns", "rows")


@dataclass(frozen=True)
class Panel:
    """Immutable N x T panel of finite observations.

    Parameters
    ----------
    values : ndarray
        Matrix of shape (n_series, n_time). Copied and frozen on
        construction. Every entry must be finite; T must be at least 2.
    """

    values: np.ndarray

    def __post_init__(self):
        arr = np.array(self.values, dtype=np.float64, copy=True, order="C")
        if arr.ndim != 2:
            raise ValueError(f"panel values must be 2-dimensional, got {arr.ndim}")
        n, t = arr.shape
        if n < 1:
            raise ValueError("panel needs at least one series")
        if t < 2:
            raise ValueError(f"panel needs at least two time points, got T={t}")
        if not np.all(np.isfinite(arr)):
            i, j = np.argwhere(~np.isfinite(arr))[0]
            raise ValueError(f"panel contains a non-finite entry at ({i}, {j})")
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    @property
    def n_series(self) -> int:
        return self.values.shape[0]

    @property
    def n_time(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class SeriesMeans:
    """Per-series means subtracted by `demean_rows`."""

    means: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = np.array(self.means, dtype=np.float64, copy=True)
        arr.flags.writeable = False
        object.__setattr__(self, "means", arr)


def demean_rows(panel: Panel) -> tuple[Panel, SeriesMeans]:
    """Subtract each series' time mean.

    Returns
    -------
    (Panel, SeriesMeans)
        The demeaned panel (each row sums to zero up to rounding) and the
        vector of subtracted means.
    """
    means = panel.values.mean(axis=1)
    return Panel(panel.values - means[:, None]), SeriesMeans(means)


def _parse_cell(cell: str, row: int, col: int) -> float:
    try:
        value = float(cell)
    except ValueError:
        raise NonNumericCellError(row, col, cell) from None
    if not math.isfinite(value):
        raise NonNumericCellError(row, col, cell)
    return value


def _parses_as_float(cell: str) -> bool:
    # header detection cares about parseability only; a non-finite token like
    # "nan" is a data cell (and a reportable error), not a column name
    try:
        float(cell)
        return True
    except ValueError:
        return False


def load_csv(path: str | Path, layout: str = "columns") -> Panel:
    """Read a panel from a comma-delimited UTF-8 file.

    Parameters
    ----------
    path : str or Path
        File to read. Cells must parse as finite numbers with a dot decimal
        separator; parsing does not consult the locale.
    layout : {"columns", "rows"}
        "columns" means each CSV column is one series (one time point per
        line); "rows" means each CSV line is one series.

    An optional single header line is auto-detected: if the first cell of the
    first line does not parse as a number, that line is skipped.

    Raises
    ------
    EmptyInputError, NonRectangularError, NonNumericCellError
    """
    if layout not in _LAYOUTS:
        raise ValueError(f"layout must be one of {_LAYOUTS}, got {layout!r}")
    text = Path(path).read_text(encoding="utf-8")
    lines = [line for line in text.splitlines() if line.strip() != ""]
    if lines and not _parses_as_float(lines[0].split(",")[0].strip()):
        lines = lines[1:]  # header line
    if not lines:
        raise EmptyInputError(f"no data rows in {path}")

    rows: list[list[float]] = []
    width = None
    for r, line in enumerate(lines, start=1):
        cells = [c.strip() for c in line.split(",")]
        if width is None:
            width = len(cells)
        elif len(cells) != width:
            raise NonRectangularError(r, width, len(cells))
        rows.append([_parse_cell(c, r, j + 1) for j, c in enumerate(cells)])

    arr = np.array(rows, dtype=np.float64)
    if layout == "columns":
        arr = arr.T
    return Panel(arr)


def csv_text(panel: Panel, layout: str = "columns", header: bool = True) -> str:
    """Render a panel as CSV text with 17 significant digits per cell."""
    if layout not in _LAYOUTS:
        raise ValueError(f"layout must be one of {_LAYOUTS}, got {layout!r}")
    arr = panel.values.T if layout == "columns" else panel.values
    lines = []
    if header:
        prefix = "series" if layout == "columns" else "t"
        lines.append(",".join(f"{prefix}_{k + 1}" for k in range(arr.shape[1])))
    for row in arr:
        lines.append(",".join(f"{v:.17g}" for v in row))
    return "\n".join(lines) + "\n"


def write_csv(panel: Panel, path: str | Path, layout: str = "columns",
              header: bool = True) -> None:
    """Write a panel as CSV (17 significant digits, bit-exact round trip)."""
    Path(path).write_text(csv_text(panel, layout, header), encoding="utf-8")
