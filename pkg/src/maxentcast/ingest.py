"""CSV ingestion and gap repair for daily rate series.

Observations are treated as equally spaced in *index* time once cleaned:
one step per row, calendar gaps carry no weight.  Everything downstream
(embedding, fitting, scoring) works purely on row indices; dates are kept
for labeling and calendar bucketing only.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from datetime import date, datetime, timedelta
from pathlib import Path

import numpy as np

from .errors import EmptySeriesError, GapError, ParseError

GAP_POLICIES = ("ffill", "drop", "error")


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """Ordered daily observations.

    ``values`` may contain NaN (a recorded-but-missing observation) until
    :func:`clean` has run; it never contains infinities.  Dates strictly
    increase and there are at least two rows.
    """

    name: str
    dates: tuple[date, ...]
    values: np.ndarray

    def __post_init__(self):
        dates = tuple(self.dates)
        values = np.array(self.values, dtype=float)
        values.setflags(write=False)
        object.__setattr__(self, "dates", dates)
        object.__setattr__(self, "values", values)
        if values.ndim != 1 or len(dates) != values.size:
            raise ValueError("dates and values must be 1-d and equally long")
        if values.size < 2:
            raise EmptySeriesError("a series needs at least two observations")
        for a, b in zip(dates, dates[1:]):
            if not a < b:
                raise ValueError(f"dates must strictly increase ({a} not before {b})")
        if np.isinf(values).any():
            raise ValueError("values must be finite (NaN allowed before cleaning)")

    def __len__(self) -> int:
        return int(self.values.size)

    def __eq__(self, other):
        if not isinstance(other, TimeSeries):
            return NotImplemented
        return (self.name == other.name and self.dates == other.dates
                and np.array_equal(self.values, other.values, equal_nan=True))

    def with_name(self, name: str) -> "TimeSeries":
        return TimeSeries(name=name, dates=self.dates, values=self.values)

    @property
    def is_clean(self) -> bool:
        return bool(np.isfinite(self.values).all())

    @property
    def n_missing(self) -> int:
        return int(np.isnan(self.values).sum())


def load_csv(path, date_col: str = "date", value_col: str = "value",
             date_format: str = "%Y-%m-%d", on_bad_value: str = "error",
             name: str | None = None) -> TimeSeries:
    """Read (date, value) rows into a TimeSeries sorted by date.

    ``on_bad_value`` controls rows whose value does not parse to a finite
    float: "error" raises ParseError naming the line, "nan" records the
    observation as missing so that :func:`clean` decides its fate.  Rows
    whose date does not parse always raise, since they cannot be placed.
    Duplicate dates raise ParseError.
    """
    if on_bad_value not in ("error", "nan"):
        raise ValueError(f"on_bad_value must be 'error' or 'nan', got {on_bad_value!r}")
    path = Path(path)
    rows: list[tuple[date, float, int]] = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise EmptySeriesError(f"{path}: empty file")
        for col in (date_col, value_col):
            if col not in reader.fieldnames:
                raise ParseError(1, f"missing column {col!r} (header: {reader.fieldnames})")
        for record in reader:
            line_no = reader.line_num
            raw_date = (record.get(date_col) or "").strip()
            raw_value = (record.get(value_col) or "").strip()
            try:
                when = datetime.strptime(raw_date, date_format).date()
            except ValueError as exc:
                raise ParseError(line_no, f"bad date {raw_date!r}: {exc}") from exc
            rows.append((when, _parse_value(raw_value, line_no, on_bad_value), line_no))
    if not rows or all(math.isnan(v) for _, v, _ in rows):
        raise EmptySeriesError(f"{path}: no usable rows")
    rows.sort(key=lambda r: r[0])
    for (d1, _, _), (d2, _, line_no) in zip(rows, rows[1:]):
        if d1 == d2:
            raise ParseError(line_no, f"duplicate date {d2}")
    return TimeSeries(
        name=name if name is not None else path.stem,
        dates=tuple(r[0] for r in rows),
        values=np.array([r[1] for r in rows]),
    )


def _parse_value(raw: str, line_no: int, on_bad_value: str) -> float:
    try:
        value = float(raw)
    except ValueError:
        value = math.nan
    if math.isfinite(value):
        return value
    if on_bad_value == "error":
        raise ParseError(line_no, f"bad value {raw!r}")
    return math.nan


def business_days(first: date, last: date) -> list[date]:
    """Every Monday-Friday date from first to last inclusive."""
    out = []
    d = first
    one = timedelta(days=1)
    while d <= last:
        if d.weekday() < 5:
            out.append(d)
        d += one
    return out


def clean(series: TimeSeries, policy: str = "ffill") -> TimeSeries:
    """Repair missing observations.

    A gap is a NaN value or a business day absent between the first and
    last dates.  "ffill" carries the previous value forward, "drop"
    removes the missing rows, "error" raises GapError at the first gap.
    Weekend rows already present are kept as-is.  Idempotent per policy:
    cleaning a clean series returns it unchanged.
    """
    if policy not in GAP_POLICIES:
        raise ValueError(f"unknown gap policy {policy!r}; expected one of {GAP_POLICIES}")
    observed = dict(zip(series.dates, series.values.tolist()))
    grid = sorted(set(series.dates) | set(business_days(series.dates[0], series.dates[-1])))

    if policy == "error":
        for d in grid:
            v = observed.get(d)
            if v is None:
                raise GapError(d, "missing business day")
            if math.isnan(v):
                raise GapError(d, "missing value")
        return series

    if policy == "ffill":
        dates_out: list[date] = []
        values_out: list[float] = []
        last_value: float | None = None
        for d in grid:
            v = observed.get(d)
            if v is None or math.isnan(v):
                if last_value is None:
                    raise GapError(d, "gap before any observed value")
                v = last_value
            last_value = v
            dates_out.append(d)
            values_out.append(v)
        return TimeSeries(series.name, tuple(dates_out), np.array(values_out))

    # drop
    kept = [(d, v) for d, v in zip(series.dates, series.values.tolist())
            if math.isfinite(v)]
    if len(kept) < 2:
        raise EmptySeriesError("fewer than two observations left after dropping gaps")
    return TimeSeries(series.name, tuple(d for d, _ in kept),
                      np.array([v for _, v in kept]))
