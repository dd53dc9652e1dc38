"""Shared fixtures and small builders for the test suite."""

from datetime import date, timedelta

import numpy as np
import pytest

from maxentcast import ErrorWindow, TimeSeries


@pytest.fixture
def write_csv(tmp_path):
    """Write rows to a temp CSV and return its path."""

    def _write(rows, header="date,value", name="series.csv"):
        path = tmp_path / name
        path.write_text("\n".join([header, *rows]) + "\n", encoding="utf-8")
        return path

    return _write


def daily_series(values, start=date(2000, 1, 3), name="test"):
    """TimeSeries on consecutive calendar days, mirroring the synth layout."""
    values = np.asarray(values, dtype=float)
    dates = [start + timedelta(days=i) for i in range(values.size)]
    return TimeSeries(name=name, dates=tuple(dates), values=values)


def make_window(rel, base, *, label="w", degenerate=False, n_points=10,
                start_index=0):
    """ErrorWindow with placeholder dates, for detector-level tests."""
    return ErrorWindow(
        label=label, start=date(2000, 1, 1), end=date(2000, 1, 2),
        start_index=start_index, end_index=start_index + n_points - 1,
        n_points=n_points, rel_mse=rel, baseline_rel_mse=base,
        degenerate=degenerate)
