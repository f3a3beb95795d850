"""Long-format time series ingestion, aggregation and gap filling.

The input is a delimited table with one sample per row. A
:class:`ColumnMapping` says which column holds the timestamp, which holds
the value and which identifies the series. The output of the module is a
:class:`TimeSeriesDataset`: ``n`` equal-length series on a shared uniform
grid with no missing values.
"""

from __future__ import annotations

import csv
import io
import math
import os
from dataclasses import dataclass, field
from datetime import datetime, timedelta
from functools import reduce
from pathlib import Path
from typing import Iterable

import numpy as np

from .errors import (
    DuplicateSample,
    EmptyInput,
    InsufficientData,
    InvalidTimestamp,
    MissingColumn,
    NonDivisibleResolution,
)

DEFAULT_TIMESTAMP_FORMAT = "%Y-%m-%dT%H:%M"
DEFAULT_MAX_GAP = 8
MISSING_TOKENS = frozenset({"", "nan", "null", "none", "na"})

# windows are anchored here; any resolution dividing one day lands on midnight
_ORIGIN = datetime(1970, 1, 1)


@dataclass(frozen=True)
class ColumnMapping:
    time_column: str
    value_column: str
    label_column: str

    def problems(self):
        names = {"time_column": self.time_column,
                 "value_column": self.value_column,
                 "label_column": self.label_column}
        out = [(k, "must be a non-empty string") for k, v in names.items()
               if not isinstance(v, str) or not v.strip()]
        if not out and len(set(names.values())) != 3:
            out.append(("time_column", "column names must be distinct"))
        return out


@dataclass
class RawRecordTable:
    """Per-label samples, each label sorted by timestamp.

    ``series`` maps label -> (timestamps, values) where values uses NaN for
    missing samples. ``resolution`` is the sampling step when it is known
    (set by :func:`aggregate`); otherwise it is inferred on demand.
    """

    series: dict
    resolution: timedelta | None = None

    def __len__(self):
        return sum(len(ts) for ts, _ in self.series.values())

    @property
    def labels(self):
        return sorted(self.series)

    def rows(self):
        for label in self.labels:
            ts, vals = self.series[label]
            for t, v in zip(ts, vals):
                yield label, t, float(v)

    def sampling_step(self) -> timedelta | None:
        if self.resolution is not None:
            return self.resolution
        return infer_step(ts for ts, _ in self.series.values())


@dataclass(frozen=True)
class TimeSeriesDataset:
    labels: tuple
    grid: tuple
    values: np.ndarray
    unit: str = ""
    resolution: timedelta = timedelta(minutes=15)
    dropped: dict = field(default_factory=dict)

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim != 2 or values.shape != (len(self.labels), len(self.grid)):
            raise ValueError(
                f"values shape {values.shape} does not match "
                f"{len(self.labels)} labels x {len(self.grid)} grid points")
        if len(self.labels) < 2 or len(self.grid) < 2:
            raise InsufficientData(
                f"need at least 2 series and 2 time steps, got "
                f"{len(self.labels)}x{len(self.grid)}")
        if not np.all(np.isfinite(values)):
            raise ValueError("dataset values must be finite")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("labels must be unique")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "grid", tuple(self.grid))

    @property
    def n(self):
        return len(self.labels)

    @property
    def d(self):
        return len(self.grid)

    def to_long_csv(self, path_or_buf, mapping=None, timestamp_format=DEFAULT_TIMESTAMP_FORMAT):
        """Write the dataset back out in the long format accepted by :func:`ingest`."""
        mapping = mapping or ColumnMapping("timestamp", "value", "label")
        own = isinstance(path_or_buf, (str, os.PathLike))
        fh = open(path_or_buf, "w", newline="", encoding="utf-8") if own else path_or_buf
        try:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow([mapping.label_column, mapping.time_column, mapping.value_column])
            for i, label in enumerate(self.labels):
                for t, v in zip(self.grid, self.values[i]):
                    writer.writerow([label, t.strftime(timestamp_format), repr(float(v))])
        finally:
            if own:
                fh.close()


def infer_step(timestamp_lists: Iterable) -> timedelta | None:
    """Greatest common divisor of all consecutive timestamp differences."""
    diffs = []
    for ts in timestamp_lists:
        for a, b in zip(ts, ts[1:]):
            diffs.append(int(round((b - a).total_seconds())))
    diffs = [x for x in diffs if x > 0]
    if not diffs:
        return None
    return timedelta(seconds=reduce(math.gcd, diffs))


def _open_text(source):
    if isinstance(source, (bytes, bytearray)):
        return io.StringIO(bytes(source).decode("utf-8-sig"))
    if isinstance(source, (str, os.PathLike)):
        return io.StringIO(Path(source).read_text(encoding="utf-8-sig"))
    data = source.read()
    if isinstance(data, bytes):
        data = data.decode("utf-8-sig")
    return io.StringIO(data)


def _parse_value(cell):
    if cell is None or cell.strip().lower() in MISSING_TOKENS:
        return math.nan
    try:
        v = float(cell)
    except ValueError:
        return math.nan
    return v if math.isfinite(v) else math.nan


def ingest(source, mapping: ColumnMapping, timestamp_format: str = DEFAULT_TIMESTAMP_FORMAT,
           delimiter: str = ",") -> RawRecordTable:
    """Read a long-format delimited table.

    ``source`` may be bytes, a binary or text stream, or a filesystem path.
    Unparseable or missing value cells are kept as NaN samples.
    """
    reader = csv.reader(_open_text(source), delimiter=delimiter)
    header = next(reader, None)
    if header is None:
        raise EmptyInput("input has no header row")
    header = [h.strip() for h in header]
    idx = {}
    for role in ("time_column", "value_column", "label_column"):
        name = getattr(mapping, role)
        if name not in header:
            raise MissingColumn(f"{role} '{name}' not found in header {header}")
        idx[role] = header.index(name)

    buckets: dict = {}
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) < len(header):
            row = row + [""] * (len(header) - len(row))
        label = row[idx["label_column"]].strip()
        stamp = row[idx["time_column"]].strip()
        try:
            t = datetime.strptime(stamp, timestamp_format)
        except ValueError as exc:
            raise InvalidTimestamp(f"line {lineno}: cannot parse '{stamp}' "
                                   f"with format '{timestamp_format}'") from exc
        samples = buckets.setdefault(label, {})
        if t in samples:
            raise DuplicateSample(f"line {lineno}: duplicate sample for label "
                                  f"'{label}' at {t.isoformat()}")
        samples[t] = _parse_value(row[idx["value_column"]])
    if not buckets:
        raise EmptyInput("input has a header but no data rows")

    series = {}
    for label, samples in buckets.items():
        ts = sorted(samples)
        series[label] = (ts, np.array([samples[t] for t in ts], dtype=float))
    return RawRecordTable(series)


def _window_start(t: datetime, res_s: int) -> datetime:
    offset = int((t - _ORIGIN).total_seconds())
    return _ORIGIN + timedelta(seconds=offset - offset % res_s)


def aggregate(table: RawRecordTable, target_resolution: timedelta, method: str = "mean") -> RawRecordTable:
    """Combine samples into half-open windows ``[t, t + target_resolution)``.

    Missing samples are ignored; a window whose samples are all missing
    yields a missing value.
    """
    if method not in ("sum", "mean"):
        raise ValueError(f"aggregation method must be 'sum' or 'mean', got {method!r}")
    res_s = int(round(target_resolution.total_seconds()))
    if res_s <= 0:
        raise NonDivisibleResolution("target resolution must be positive")
    step = table.sampling_step()
    if step is not None:
        step_s = int(round(step.total_seconds()))
        if res_s % step_s:
            raise NonDivisibleResolution(
                f"target resolution {target_resolution} is not a multiple "
                f"of the source step {step}")

    reduce_fn = np.sum if method == "sum" else np.mean
    out = {}
    for label, (ts, vals) in table.series.items():
        windows: dict = {}
        for t, v in zip(ts, vals):
            windows.setdefault(_window_start(t, res_s), []).append(v)
        starts = sorted(windows)
        agg = []
        for w in starts:
            present = [v for v in windows[w] if not math.isnan(v)]
            agg.append(float(reduce_fn(present)) if present else math.nan)
        out[label] = (starts, np.array(agg, dtype=float))
    return RawRecordTable(out, resolution=timedelta(seconds=res_s))


def _longest_gap(missing: np.ndarray) -> int:
    longest = run = 0
    for m in missing:
        run = run + 1 if m else 0
        longest = max(longest, run)
    return longest


def interpolate_and_align(table: RawRecordTable, max_gap: int | None = DEFAULT_MAX_GAP,
                          drop_insufficient: bool = False, unit: str = "") -> TimeSeriesDataset:
    """Place every series on one uniform grid and fill the holes.

    Interior gaps are filled linearly, leading and trailing gaps take the
    nearest observed value. A series whose longest run of missing steps
    exceeds ``max_gap`` is dropped and listed in ``dataset.dropped``. A
    series with fewer than two observed samples raises
    :class:`InsufficientData`, or is dropped when ``drop_insufficient``.
    """
    if not table.series:
        raise EmptyInput("no series to align")
    step = table.sampling_step()
    if step is None:
        raise InsufficientData("cannot infer a sampling step: every series has a single timestamp")
    step_s = int(round(step.total_seconds()))
    t0 = min(ts[0] for ts, _ in table.series.values())
    t1 = max(ts[-1] for ts, _ in table.series.values())
    span = int(round((t1 - t0).total_seconds()))
    if span % step_s:
        raise NonDivisibleResolution(f"timestamps do not lie on a {step} grid")
    d = span // step_s + 1
    grid = tuple(t0 + timedelta(seconds=i * step_s) for i in range(d))

    labels, rows, dropped = [], [], {}
    for label in sorted(table.series):
        ts, vals = table.series[label]
        row = np.full(d, np.nan)
        for t, v in zip(ts, vals):
            offset = int(round((t - t0).total_seconds()))
            if offset % step_s:
                raise NonDivisibleResolution(f"label '{label}': {t} is off the {step} grid")
            row[offset // step_s] = v
        missing = np.isnan(row)
        n_valid = int((~missing).sum())
        if n_valid < 2:
            reason = f"only {n_valid} non-missing sample(s)"
            if not drop_insufficient:
                raise InsufficientData(f"label '{label}': {reason}")
            dropped[label] = reason
            continue
        gap = _longest_gap(missing)
        if max_gap is not None and gap > max_gap:
            dropped[label] = f"gap of {gap} missing steps exceeds max_gap={max_gap}"
            continue
        if missing.any():
            idx = np.arange(d)
            row = np.interp(idx, idx[~missing], row[~missing])
        labels.append(label)
        rows.append(row)

    if len(labels) < 2:
        raise InsufficientData(
            f"fewer than 2 series left after dropping {len(dropped)}: {dropped}")
    return TimeSeriesDataset(tuple(labels), grid, np.vstack(rows), unit=unit,
                             resolution=step, dropped=dropped)
