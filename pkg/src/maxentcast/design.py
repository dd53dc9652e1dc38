"""Delay vectors, polynomial features, and the linear constraint system.

A delay vector at index t collects dim lagged observations
``[v(t), v(t-lag), ..., v(t-(dim-1)*lag)]``.  The model is a full
polynomial in those components up to ``degree``.  Feature rows follow one
fixed total order: the constant 1 first, then every monomial of degree
1, 2, ... in turn, each degree block ordered lexicographically by its
non-decreasing tuple of component indices (v1 before v2, v1*v1 before
v1*v2 before v2*v2).  This order is part of the serialization contract
and never changes.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations_with_replacement
from math import comb
from numbers import Integral
from pathlib import Path

import numpy as np

from .errors import InfeasibleWindowError
from .ingest import TimeSeries


@dataclass(frozen=True)
class EmbedConfig:
    """Reconstruction and fit geometry; every size is in index steps."""

    dim: int        # components per delay vector
    degree: int     # polynomial degree of the fitted map
    horizon: int    # how far ahead each prediction targets
    n_fit: int      # constraint rows used for fitting
    lag: int = 1    # index spacing between delay components

    def __post_init__(self):
        for field_name in ("dim", "degree", "horizon", "n_fit", "lag"):
            v = getattr(self, field_name)
            if not isinstance(v, Integral) or v < 1:
                raise ValueError(f"{field_name} must be an integer >= 1, got {v!r}")
            object.__setattr__(self, field_name, int(v))

    @property
    def span(self) -> int:
        """History needed before index t to build its delay vector."""
        return (self.dim - 1) * self.lag

    @property
    def n_features(self) -> int:
        return count_coefficients(self.dim, self.degree)


def count_coefficients(dim: int, degree: int) -> int:
    """Number of model coefficients: the constant term plus every monomial
    of degree 1..degree in dim variables (multisets, i.e. combinations
    with repetition)."""
    if dim < 1 or degree < 1:
        raise ValueError("dim and degree must both be >= 1")
    return 1 + sum(comb(dim + k - 1, k) for k in range(1, degree + 1))


@lru_cache(maxsize=None)
def monomial_terms(dim: int, degree: int) -> tuple[tuple[int, ...], ...]:
    """Component-index multisets in the canonical feature order.

    () is the constant term, (0,) is v1, (0, 1) is v1*v2, and so on.
    """
    if dim < 1 or degree < 1:
        raise ValueError("dim and degree must both be >= 1")
    terms: list[tuple[int, ...]] = [()]
    for k in range(1, degree + 1):
        terms.extend(combinations_with_replacement(range(dim), k))
    return tuple(terms)


def monomial_labels(dim: int, degree: int) -> tuple[str, ...]:
    """Column names in feature order: "1", "v1", "v1*v2", ..."""
    return tuple("1" if not term else "*".join(f"v{i + 1}" for i in term)
                 for term in monomial_terms(dim, degree))


def monomial_row(v, degree: int) -> np.ndarray:
    """Feature row for a single delay vector."""
    v = np.asarray(v, dtype=float)
    if v.ndim != 1 or v.size < 1:
        raise ValueError("delay vector must be a nonempty 1-d array")
    terms = monomial_terms(v.size, degree)
    row = np.empty(len(terms))
    for j, term in enumerate(terms):
        row[j] = np.prod(v[list(term)]) if term else 1.0
    return row


def feature_matrix(delays: np.ndarray, degree: int) -> np.ndarray:
    """Feature rows for a stack of delay vectors (one vector per row)."""
    delays = np.asarray(delays, dtype=float)
    if delays.ndim != 2:
        raise ValueError("delays must be 2-d (n_rows, dim)")
    n, dim = delays.shape
    terms = monomial_terms(dim, degree)
    out = np.empty((n, len(terms)))
    for j, term in enumerate(terms):
        if not term:
            out[:, j] = 1.0
        else:
            col = delays[:, term[0]].copy()
            for i in term[1:]:
                col *= delays[:, i]
            out[:, j] = col
    return out


def delay_vector(values, t: int, dim: int, lag: int = 1) -> np.ndarray:
    """[v(t), v(t-lag), ..., v(t-(dim-1)*lag)] from an index-time array."""
    values = np.asarray(values, dtype=float)
    if t - (dim - 1) * lag < 0 or t >= values.size:
        raise InfeasibleWindowError(
            f"index {t} cannot host a delay vector with dim={dim}, lag={lag}",
            start=t, available=values.size)
    return values[t - lag * np.arange(dim)]


def delay_matrix(values, times, dim: int, lag: int = 1) -> np.ndarray:
    """Delay vectors for many indices at once, one per row."""
    values = np.asarray(values, dtype=float)
    times = np.asarray(times, dtype=int)
    return np.column_stack([values[times - i * lag] for i in range(dim)])


def max_rows(n_obs: int, dim: int, lag: int = 1, horizon: int = 1,
             start: int | None = None) -> int:
    """How many constraint rows a series of n_obs points can host.

    A row anchored at index t needs history back to t - (dim-1)*lag and a
    target at t + horizon, so t ranges over [start, n_obs - 1 - horizon].
    """
    span = (dim - 1) * lag
    if start is None:
        start = span
    if start < span:
        raise ValueError(f"start {start} is before the earliest feasible index {span}")
    return max(0, n_obs - horizon - start)


@dataclass(frozen=True)
class DesignMatrix:
    """The linear system features @ a = targets, with row bookkeeping.

    Row n holds the polynomial features of the delay vector at index
    row_times[n]; targets[n] is the observation horizon steps later.
    """

    features: np.ndarray   # (n_fit, n_features)
    targets: np.ndarray    # (n_fit,)
    row_times: np.ndarray  # (n_fit,)
    config: EmbedConfig

    def __post_init__(self):
        features = np.array(self.features, dtype=float)
        targets = np.array(self.targets, dtype=float)
        row_times = np.array(self.row_times, dtype=int)
        for arr in (features, targets, row_times):
            arr.setflags(write=False)
        object.__setattr__(self, "features", features)
        object.__setattr__(self, "targets", targets)
        object.__setattr__(self, "row_times", row_times)
        if features.ndim != 2:
            raise ValueError("features must be 2-d")
        n = features.shape[0]
        if targets.shape != (n,) or row_times.shape != (n,) or n < 1:
            raise ValueError("features, targets and row_times must share a positive length")
        if features.shape[1] != self.config.n_features:
            raise ValueError(
                f"feature count {features.shape[1]} does not match the "
                f"configured {self.config.n_features}")
        if not np.all(features[:, 0] == 1.0):
            raise ValueError("the first feature column must be constant 1")

    def __len__(self) -> int:
        return int(self.features.shape[0])

    @property
    def labels(self) -> tuple[str, ...]:
        return monomial_labels(self.config.dim, self.config.degree)

    def to_csv(self, path) -> None:
        """One row per constraint: every feature column, then the target.

        A debugging aid, not a stability-guaranteed format; %.17g keeps
        doubles exact on a round trip.
        """
        header = ",".join((*self.labels, "target"))
        data = np.column_stack([self.features, self.targets])
        np.savetxt(Path(path), data, fmt="%.17g", delimiter=",",
                   header=header, comments="")


def read_design_csv(path) -> tuple[np.ndarray, np.ndarray]:
    """Read back what DesignMatrix.to_csv wrote: (features, targets)."""
    data = np.loadtxt(Path(path), delimiter=",", skiprows=1, ndmin=2)
    return data[:, :-1], data[:, -1]


def embed(series: TimeSeries, config: EmbedConfig,
          start: int | None = None) -> DesignMatrix:
    """Build the constraint system from n_fit consecutive anchors.

    Row n holds the features of the delay vector at t = start + n and the
    target v(start + n + horizon).  start defaults to the earliest
    feasible index (dim-1)*lag, so the fit consumes the earliest rows.
    """
    values = series.values
    n_obs = values.size
    if start is None:
        start = config.span
    last_needed = start + config.n_fit - 1 + config.horizon
    if start < config.span or last_needed > n_obs - 1:
        raise InfeasibleWindowError(
            f"window start={start}, n_fit={config.n_fit}, horizon={config.horizon} "
            f"needs indices up to {last_needed}, series has {n_obs}",
            start=start, n_rows=config.n_fit, needed=last_needed + 1,
            available=n_obs)
    used = values[start - config.span: last_needed + 1]
    if not np.isfinite(used).all():
        raise ValueError("series has missing values inside the fit window; clean it first")
    times = np.arange(start, start + config.n_fit)
    features = feature_matrix(delay_matrix(values, times, config.dim, config.lag),
                              config.degree)
    return DesignMatrix(features=features, targets=values[times + config.horizon],
                        row_times=times, config=config)
