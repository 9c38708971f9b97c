"""CSV reading and writing.

Canonical files have the header ``t_ms,x_px,y_px[,label]``, UTF-8, LF line
endings and ``.`` decimals. Raw exports with other layouts are read through a
``ColumnMap``. Lines starting with ``#`` and blank lines are skipped; reported
line numbers are physical, 1-based.
"""

from __future__ import annotations

import csv
import enum
import math
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from gazekit.errors import (
    EmptySeries,
    InputError,
    MalformedRow,
    MissingLabelColumn,
    NonMonotonicTimestamp,
    UnknownLabelToken,
)
from gazekit.model import GazeSeries, LabelSeries

SERIES_HEADER = ("t_ms", "x_px", "y_px")


@dataclass(frozen=True)
class ColumnMap:
    t_col: int = 0
    x_col: int = 1
    y_col: int = 2
    label_col: Optional[int] = None
    has_header: bool = True

    def __post_init__(self):
        cols = [self.t_col, self.x_col, self.y_col]
        if self.label_col is not None:
            cols.append(self.label_col)
        if any(c < 0 for c in cols):
            raise InputError(f"column indices must be >= 0, got {cols}")
        if len(set(cols)) != len(cols):
            raise InputError(f"column indices must be distinct, got {cols}")

    @property
    def width(self) -> int:
        cols = [self.t_col, self.x_col, self.y_col]
        if self.label_col is not None:
            cols.append(self.label_col)
        return max(cols) + 1


class MissingPolicy(str, enum.Enum):
    DROP = "drop"
    INTERPOLATE = "interpolate"
    FAIL = "fail"


@dataclass(frozen=True)
class IngestPolicy:
    on_missing: MissingPolicy = MissingPolicy.DROP
    max_gap_ms: float = 100.0

    def __post_init__(self):
        object.__setattr__(self, "on_missing", MissingPolicy(self.on_missing))
        if self.on_missing is MissingPolicy.INTERPOLATE and not self.max_gap_ms > 0:
            raise InputError(f"max_gap_ms must be > 0 for interpolation, got {self.max_gap_ms}")


@dataclass
class _Rows:
    lines: list[int]
    t: np.ndarray
    x: np.ndarray
    y: np.ndarray
    tokens: list[str]


def _number(text: str, line: int, what: str) -> float:
    text = text.strip()
    if text == "":
        return math.nan
    try:
        return float(text)
    except ValueError:
        raise MalformedRow(line, f"{what} value {text!r} is not a number") from None


def _read_rows(path, cmap: ColumnMap) -> _Rows:
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"no such file: {path}")
    lines, ts, xs, ys, tokens = [], [], [], [], []
    header_seen = not cmap.has_header
    with path.open(newline="", encoding="utf-8") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or not "".join(row).strip() or row[0].lstrip().startswith("#"):
                continue
            if not header_seen:
                header_seen = True
                continue
            if len(row) < cmap.width:
                raise MalformedRow(lineno, f"expected at least {cmap.width} columns, got {len(row)}")
            t = _number(row[cmap.t_col], lineno, "timestamp")
            if not math.isfinite(t):
                raise MalformedRow(lineno, "missing or non-finite timestamp")
            if ts and t <= ts[-1]:
                raise NonMonotonicTimestamp(lineno)
            lines.append(lineno)
            ts.append(t)
            xs.append(_number(row[cmap.x_col], lineno, "x"))
            ys.append(_number(row[cmap.y_col], lineno, "y"))
            if cmap.label_col is not None:
                tokens.append(row[cmap.label_col].strip())
    return _Rows(lines, np.array(ts), np.array(xs), np.array(ys), tokens)


def _resolve_missing(rows: _Rows, policy: IngestPolicy) -> np.ndarray:
    """Fill or flag rows with non-finite positions; returns the kept-row mask."""
    bad = ~(np.isfinite(rows.x) & np.isfinite(rows.y))
    if not bad.any():
        return ~bad
    if policy.on_missing is MissingPolicy.FAIL:
        raise MalformedRow(rows.lines[int(np.flatnonzero(bad)[0])], "missing or non-finite gaze position")
    keep = ~bad
    if policy.on_missing is MissingPolicy.INTERPOLATE and keep.any():
        good = np.flatnonzero(keep)
        for i in np.flatnonzero(bad):
            after = np.searchsorted(good, i)
            if after == 0 or after == len(good):
                continue
            a, b = good[after - 1], good[after]
            if rows.t[b] - rows.t[a] > policy.max_gap_ms:
                continue
            w = (rows.t[i] - rows.t[a]) / (rows.t[b] - rows.t[a])
            rows.x[i] = rows.x[a] + w * (rows.x[b] - rows.x[a])
            rows.y[i] = rows.y[a] + w * (rows.y[b] - rows.y[a])
            keep[i] = True
    return keep


def _labels_from_tokens(tokens: Sequence[str], lines: Sequence[int], vocabulary: Sequence[str]) -> LabelSeries:
    lookup = {vocabulary[0]: 0, vocabulary[1]: 1}
    codes = np.empty(len(tokens), dtype=np.int8)
    for j, (tok, line) in enumerate(zip(tokens, lines)):
        try:
            codes[j] = lookup[tok]
        except KeyError:
            raise UnknownLabelToken(line, tok) from None
    return LabelSeries(codes)


def parse_csv(path, cmap: ColumnMap = ColumnMap(), policy: IngestPolicy = IngestPolicy(), sample_rate_hz: float = 1000.0) -> GazeSeries:
    rows = _read_rows(path, cmap)
    if not rows.lines:
        raise EmptySeries(f"no data rows in {path}")
    keep = _resolve_missing(rows, policy)
    if not keep.any():
        raise EmptySeries(f"no usable samples in {path}")
    return GazeSeries(rows.t[keep], rows.x[keep], rows.y[keep], sample_rate_hz)


def parse_ground_truth(path, cmap: ColumnMap, vocabulary: Sequence[str] = ("F", "S")) -> LabelSeries:
    if cmap.label_col is None:
        raise MissingLabelColumn("column map has no label column")
    rows = _read_rows(path, cmap)
    if not rows.lines:
        raise EmptySeries(f"no data rows in {path}")
    return _labels_from_tokens(rows.tokens, rows.lines, vocabulary)


def parse_labeled_csv(
    path,
    cmap: ColumnMap,
    policy: IngestPolicy = IngestPolicy(),
    vocabulary: Sequence[str] = ("F", "S"),
    sample_rate_hz: float = 1000.0,
) -> tuple[GazeSeries, LabelSeries]:
    """Series and labels from one file, keeping them aligned when rows are dropped."""
    if cmap.label_col is None:
        raise MissingLabelColumn("column map has no label column")
    rows = _read_rows(path, cmap)
    if not rows.lines:
        raise EmptySeries(f"no data rows in {path}")
    labels = _labels_from_tokens(rows.tokens, rows.lines, vocabulary)
    keep = _resolve_missing(rows, policy)
    if not keep.any():
        raise EmptySeries(f"no usable samples in {path}")
    series = GazeSeries(rows.t[keep], rows.x[keep], rows.y[keep], sample_rate_hz)
    return series, LabelSeries(labels.codes[keep])


def read_label_file(path, vocabulary: Sequence[str] = ("F", "S")) -> LabelSeries:
    """Labels from a file whose header names a ``label`` column."""
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"no such file: {path}")
    with path.open(newline="", encoding="utf-8") as fh:
        for row in csv.reader(fh):
            if row and not row[0].lstrip().startswith("#") and "".join(row).strip():
                header = [c.strip() for c in row]
                break
        else:
            raise EmptySeries(f"no data rows in {path}")
    if "label" not in header:
        raise MissingLabelColumn(f"{path} has no 'label' column")
    lines, tokens = _read_label_rows(path, header.index("label"))
    return _labels_from_tokens(tokens, lines, vocabulary)


def _read_label_rows(path: Path, label_col: int) -> tuple[list[int], list[str]]:
    lines, tokens = [], []
    header_seen = False
    with path.open(newline="", encoding="utf-8") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or not "".join(row).strip() or row[0].lstrip().startswith("#"):
                continue
            if not header_seen:
                header_seen = True
                continue
            if len(row) <= label_col:
                raise MalformedRow(lineno, "missing label column")
            lines.append(lineno)
            tokens.append(row[label_col].strip())
    if not lines:
        raise EmptySeries(f"no data rows in {path}")
    return lines, tokens


def fmt(v: float) -> str:
    """Shortest exact text for a float; integral values print without a decimal point."""
    v = float(v)
    if v.is_integer() and abs(v) < 2**53:
        return str(int(v))
    return repr(v)


def atomic_write_text(path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def series_to_csv(series: GazeSeries, labels: LabelSeries | None = None) -> str:
    header = list(SERIES_HEADER)
    if labels is not None:
        if len(labels) != len(series):
            raise InputError("labels and series differ in length")
        header.append("label")
    out = [",".join(header)]
    tokens = labels.tokens() if labels is not None else None
    for j, (t, x, y) in enumerate(zip(series.t.tolist(), series.x.tolist(), series.y.tolist())):
        row = f"{fmt(t)},{fmt(x)},{fmt(y)}"
        out.append(row if tokens is None else f"{row},{tokens[j]}")
    return "\n".join(out) + "\n"


def labels_to_csv(t: np.ndarray, labels: LabelSeries) -> str:
    if len(t) != len(labels):
        raise InputError("labels and timestamps differ in length")
    out = ["t_ms,label"]
    out.extend(f"{fmt(ti)},{tok}" for ti, tok in zip(np.asarray(t).tolist(), labels.tokens()))
    return "\n".join(out) + "\n"


def write_series_csv(path, series: GazeSeries, labels: LabelSeries | None = None) -> None:
    atomic_write_text(path, series_to_csv(series, labels))


def write_labels_csv(path, t: np.ndarray, labels: LabelSeries) -> None:
    atomic_write_text(path, labels_to_csv(t, labels))
