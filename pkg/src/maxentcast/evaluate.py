"""Forecast scoring: variance-normalized error by calendar or fixed windows.

relative_mse is sum((predicted - actual)^2) / sum((actual - mean)^2), the
squared error normalized by the window's own variance (equivalently
1 - R^2): 0 is perfect, 1 is no better than the window mean, and the
score is invariant under affine rescaling of the data.  Each window also
gets a baseline: the same score for the naive carry-forward forecast at
matched horizon, v_hat(t + h) = v(t), computed from the window's actuals
alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from datetime import date
from numbers import Integral

import numpy as np

from .design import EmbedConfig, embed
from .errors import DegenerateWindowError, InfeasibleWindowError
from .ingest import TimeSeries
from .model import FittedModel, ForecastFrame, fit, forecast_series


def relative_mse(actual, predicted) -> float:
    """Squared forecast error over the window, relative to the window's
    squared deviation from its own mean."""
    a = np.asarray(actual, dtype=float)
    p = np.asarray(predicted, dtype=float)
    if a.ndim != 1 or a.shape != p.shape:
        raise ValueError("actual and predicted must be 1-d and equally long")
    if a.size < 2:
        raise ValueError("need at least two points to score a window")
    if not (np.isfinite(a).all() and np.isfinite(p).all()):
        raise ValueError("scores need finite inputs")
    dev = a - a.mean()
    denom = float(dev @ dev)
    if denom <= 0.0:
        raise DegenerateWindowError("actual values have zero variance")
    err = p - a
    return float(err @ err) / denom


def baseline_error(actual, horizon: int) -> float:
    """relative_mse of the naive matched-horizon forecast
    v_hat(t + horizon) = v(t), over this window's actuals."""
    if not isinstance(horizon, Integral) or horizon < 1:
        raise ValueError(f"horizon must be an integer >= 1, got {horizon!r}")
    a = np.asarray(actual, dtype=float)
    if a.ndim != 1:
        raise ValueError("actual must be 1-d")
    if a.size < horizon + 2:
        raise DegenerateWindowError(
            f"window of {a.size} points cannot score a horizon of {horizon}")
    return relative_mse(a[horizon:], a[:-horizon])


@dataclass(frozen=True)
class YearBuckets:
    """Partition records by the calendar year of their target date."""

    def to_payload(self) -> dict:
        return {"kind": "year"}


@dataclass(frozen=True)
class WindowBuckets:
    """Partition records into consecutive fixed-width index windows."""

    width: int

    def __post_init__(self):
        if not isinstance(self.width, Integral) or self.width < 2:
            raise ValueError(f"window width must be an integer >= 2, got {self.width!r}")
        object.__setattr__(self, "width", int(self.width))

    def to_payload(self) -> dict:
        return {"kind": "window", "width": self.width}


Bucketing = YearBuckets | WindowBuckets


@dataclass(frozen=True)
class ErrorWindow:
    """Scores for one bucket of forecast records.

    Degenerate buckets (too few points or zero variance for either score)
    are kept in place with NaN scores and the marker set, so window
    indices always partition the record range.
    """

    label: str
    start: date
    end: date
    start_index: int          # series index of the first target in the bucket
    end_index: int            # series index of the last target
    n_points: int
    rel_mse: float
    baseline_rel_mse: float
    degenerate: bool

    @property
    def score_ratio(self) -> float:
        """rel_mse / baseline_rel_mse; NaN when either side is unusable."""
        if self.degenerate or not self.baseline_rel_mse > 0:
            return math.nan
        return self.rel_mse / self.baseline_rel_mse


def _partition(frame: ForecastFrame, bucketing: Bucketing) -> list[tuple[str, int, int]]:
    n = len(frame)
    if isinstance(bucketing, WindowBuckets):
        w = bucketing.width
        return [(f"w{k:03d}", lo, min(lo + w, n))
                for k, lo in enumerate(range(0, n, w))]
    if isinstance(bucketing, YearBuckets):
        years = [d.year for d in frame.dates]
        bounds: list[tuple[str, int, int]] = []
        lo = 0
        for i in range(1, n + 1):
            if i == n or years[i] != years[lo]:
                bounds.append((str(years[lo]), lo, i))
                lo = i
        return bounds
    raise ValueError(f"unknown bucketing {bucketing!r}")


def error_by_period(frame: ForecastFrame, bucketing: Bucketing,
                    horizon: int | None = None) -> list[ErrorWindow]:
    """Score every bucket of a forecast frame; buckets partition the records.

    horizon defaults to the frame's own; it exists so the naive baseline
    can be evaluated at the same lead as the model forecasts.
    """
    if len(frame) == 0:
        raise ValueError("no forecast records to score")
    h = frame.horizon if horizon is None else horizon
    out: list[ErrorWindow] = []
    for label, lo, hi in _partition(frame, bucketing):
        a = frame.actual[lo:hi]
        p = frame.predicted[lo:hi]
        try:
            rel = relative_mse(a, p)
        except (DegenerateWindowError, ValueError):
            rel = math.nan
        try:
            base = baseline_error(a, h)
        except DegenerateWindowError:
            base = math.nan
        out.append(ErrorWindow(
            label=label, start=frame.dates[lo], end=frame.dates[hi - 1],
            start_index=int(frame.target_times[lo]),
            end_index=int(frame.target_times[hi - 1]),
            n_points=hi - lo, rel_mse=rel, baseline_rel_mse=base,
            degenerate=not (math.isfinite(rel) and math.isfinite(base))))
    return out


@dataclass(frozen=True)
class ProtocolConfig:
    """Fit-once-forecast-rest experiment settings.

    The model is fitted on the earliest fit_window constraint rows and
    then predicts every remaining feasible point, independently for each
    anticipation (horizon) value.
    """

    dim: int = 4
    degree: int = 2
    fit_window: int = 700
    anticipation: tuple[int, ...] = (7, 10, 13, 16)
    bucketing: Bucketing = field(default_factory=YearBuckets)
    lag: int = 1

    def __post_init__(self):
        object.__setattr__(self, "anticipation", tuple(int(t) for t in self.anticipation))
        if not self.anticipation:
            raise ValueError("anticipation set must be nonempty")
        if any(t < 1 for t in self.anticipation):
            raise ValueError("every anticipation must be >= 1")
        if len(set(self.anticipation)) != len(self.anticipation):
            raise ValueError("anticipation values must be distinct")
        for field_name in ("dim", "degree", "fit_window", "lag"):
            v = getattr(self, field_name)
            if not isinstance(v, Integral) or v < 1:
                raise ValueError(f"{field_name} must be an integer >= 1, got {v!r}")
            object.__setattr__(self, field_name, int(v))

    def embed_config(self, horizon: int) -> EmbedConfig:
        return EmbedConfig(dim=self.dim, degree=self.degree, horizon=horizon,
                           n_fit=self.fit_window, lag=self.lag)

    def to_payload(self) -> dict:
        return {"dim": self.dim, "degree": self.degree,
                "fit_window": self.fit_window,
                "anticipation": list(self.anticipation),
                "bucketing": self.bucketing.to_payload(), "lag": self.lag}


@dataclass(frozen=True)
class ForecastTrack:
    """Everything the protocol produced for one anticipation value."""

    horizon: int
    model: FittedModel
    frame: ForecastFrame
    windows: tuple[ErrorWindow, ...]
    rel_mse: float            # over the whole out-of-sample stretch
    baseline_rel_mse: float


@dataclass(frozen=True)
class PredictabilityReport:
    series_name: str
    protocol: ProtocolConfig
    rank_tolerance: float
    standardized: bool
    tracks: tuple[ForecastTrack, ...]


def run_protocol(series: TimeSeries, protocol: ProtocolConfig,
                 rank_tolerance: float = 1e-10,
                 standardize: bool = False) -> PredictabilityReport:
    """Fit on the earliest fit_window constraints, forecast everything
    after, and score per bucket, separately for each anticipation value."""
    tracks: list[ForecastTrack] = []
    for horizon in protocol.anticipation:
        cfg = protocol.embed_config(horizon)
        dm = embed(series, cfg)
        model = fit(dm, rank_tolerance=rank_tolerance, standardize=standardize)
        first = cfg.span + protocol.fit_window
        last = len(series) - 1 - horizon
        if last < first:
            raise InfeasibleWindowError(
                f"anticipation {horizon}: no out-of-sample anchors "
                f"(first candidate {first}, last feasible {last})",
                start=first, available=len(series))
        frame = forecast_series(series, model, range(first, last + 1))
        windows = error_by_period(frame, protocol.bucketing, horizon)
        try:
            overall = relative_mse(frame.actual, frame.predicted)
        except (DegenerateWindowError, ValueError):
            overall = math.nan
        try:
            base = baseline_error(frame.actual, horizon)
        except DegenerateWindowError:
            base = math.nan
        tracks.append(ForecastTrack(horizon=horizon, model=model, frame=frame,
                                    windows=tuple(windows), rel_mse=overall,
                                    baseline_rel_mse=base))
    return PredictabilityReport(series_name=series.name, protocol=protocol,
                                rank_tolerance=float(rank_tolerance),
                                standardized=bool(standardize),
                                tracks=tuple(tracks))
