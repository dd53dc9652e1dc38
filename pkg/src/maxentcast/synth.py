"""Seeded series generators used as ground-truth fixtures.

Three families: random walks (the stochastic null), polynomial delay maps
(deterministic dynamics, optionally noisy), and splices that hand over
from one generator to another at a known index.  Every generator is a
pure function of its spec; randomness comes only from :mod:`maxentcast.rng`
(splitmix64 counter plus Box-Muller), so outputs are bit-reproducible
across platforms.  Synthetic series carry consecutive calendar dates from
2000-01-01; index time is what downstream code consumes.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date, timedelta
from numbers import Integral

import numpy as np

from . import rng
from .design import count_coefficients, monomial_terms
from .errors import DivergentOrbitError
from .ingest import TimeSeries

_EPOCH = date(2000, 1, 1)


def _index_dates(n: int, start: date = _EPOCH) -> tuple[date, ...]:
    return tuple(start + timedelta(days=i) for i in range(n))


def _infer_degree(dim: int, n_coefficients: int) -> int:
    """The polynomial degree whose full coefficient count matches."""
    k = 1
    while count_coefficients(dim, k) < n_coefficients:
        k += 1
    if count_coefficients(dim, k) != n_coefficients:
        raise ValueError(
            f"{n_coefficients} coefficients do not form a full polynomial "
            f"basis in {dim} variables")
    return k


@dataclass(frozen=True)
class RandomWalkSpec:
    n: int
    sigma: float
    x0: float = 0.0
    seed: int = 0

    kind = "random_walk"

    def __post_init__(self):
        if not isinstance(self.n, Integral) or self.n < 1:
            raise ValueError(f"n must be an integer >= 1, got {self.n!r}")
        if not self.sigma > 0:
            raise ValueError(f"sigma must be positive, got {self.sigma!r}")
        if not np.isfinite(self.x0):
            raise ValueError("x0 must be finite")


@dataclass(frozen=True)
class PolyMapSpec:
    """v(t+1) = coefficients . monomials(delay vector at t) + noise.

    The delay vector uses lag 1: [v(t), v(t-1), ..., v(t-dim+1)].  The
    degree is inferred from the coefficient count.  init supplies the
    opening values (at least dim of them); leave it None only when the
    spec is the second half of a splice, where the first segment's tail
    takes its place.
    """

    n: int
    dim: int
    coefficients: tuple[float, ...]
    init: tuple[float, ...] | None = None
    noise_sigma: float = 0.0
    seed: int = 0
    bound: float = 1e6

    kind = "poly_map"

    def __post_init__(self):
        object.__setattr__(self, "coefficients",
                           tuple(float(c) for c in self.coefficients))
        if self.init is not None:
            object.__setattr__(self, "init", tuple(float(x) for x in self.init))
        if not isinstance(self.n, Integral) or self.n < 1:
            raise ValueError(f"n must be an integer >= 1, got {self.n!r}")
        if not isinstance(self.dim, Integral) or self.dim < 1:
            raise ValueError(f"dim must be an integer >= 1, got {self.dim!r}")
        _infer_degree(self.dim, len(self.coefficients))
        if self.init is not None and len(self.init) < self.dim:
            raise ValueError(f"init needs at least dim={self.dim} values")
        if self.noise_sigma < 0:
            raise ValueError("noise_sigma must be nonnegative")
        if not self.bound > 0:
            raise ValueError("bound must be positive")

    @property
    def degree(self) -> int:
        return _infer_degree(self.dim, len(self.coefficients))


@dataclass(frozen=True)
class SplicedSpec:
    first: RandomWalkSpec | PolyMapSpec
    second: RandomWalkSpec | PolyMapSpec
    splice_index: int

    kind = "spliced"

    def __post_init__(self):
        total = self.first.n + self.second.n
        if self.splice_index != self.first.n:
            raise ValueError(
                f"splice_index {self.splice_index} must equal the first "
                f"segment's length {self.first.n}")
        if not 0 < self.splice_index < total:
            raise ValueError(
                f"splice_index {self.splice_index} must be interior to (0, {total})")

    @property
    def n(self) -> int:
        return self.first.n + self.second.n


@dataclass(frozen=True)
class SplicedSeries:
    series: TimeSeries
    changepoint: int  # first index governed by the second spec


def continue_poly_map(history, coefficients, dim: int, n_new: int,
                      noise_sigma: float = 0.0, seed: int = 0,
                      bound: float = 1e6, step_offset: int = 0) -> np.ndarray:
    """Iterate the map forward from the tail of history.

    Returns only the n_new new values.  step_offset is the absolute index
    of the first new value in the caller's series, used for error reports.
    """
    coefficients = np.asarray(coefficients, dtype=float)
    degree = _infer_degree(dim, coefficients.size)
    terms = monomial_terms(dim, degree)
    history = np.asarray(history, dtype=float)
    if history.size < dim:
        raise ValueError(f"history of {history.size} values cannot seed a dim-{dim} map")
    window = list(history[-dim:])
    eps = rng.normals(seed, n_new) if noise_sigma > 0 else None
    out = np.empty(n_new)
    coef_list = coefficients.tolist()
    for j in range(n_new):
        acc = coef_list[0]
        for c, term in zip(coef_list[1:], terms[1:]):
            prod = 1.0
            for i in term:
                prod *= window[-1 - i]  # component i is the i-th lag back
            acc += c * prod
        if noise_sigma > 0:
            acc += noise_sigma * eps[j]
        if not np.isfinite(acc) or abs(acc) > bound:
            bad = acc if np.isfinite(acc) else float("inf")
            raise DivergentOrbitError(step_offset + j, bad, bound)
        out[j] = acc
        window = window[1:] + [acc]
    return out


def _walk_values(n: int, sigma: float, x0: float, seed: int) -> np.ndarray:
    steps = rng.normals(seed, n - 1) if n > 1 else np.empty(0)
    values = np.empty(n)
    values[0] = x0
    if n > 1:
        values[1:] = x0 + sigma * np.cumsum(steps)
    return values


def _continue_walk(last: float, n_new: int, sigma: float, seed: int) -> np.ndarray:
    return last + sigma * np.cumsum(rng.normals(seed, n_new))


def gen_random_walk(n: int, sigma: float, x0: float = 0.0, seed: int = 0,
                    name: str | None = None) -> TimeSeries:
    """Gaussian random walk: v(0) = x0, v(t+1) = v(t) + sigma * eps(t)."""
    spec = RandomWalkSpec(n=n, sigma=sigma, x0=x0, seed=seed)
    if spec.n < 2:
        raise ValueError("a standalone walk needs n >= 2")
    return TimeSeries(name or f"walk-s{seed}", _index_dates(n),
                      _walk_values(n, sigma, x0, seed))


def gen_poly_map(n: int, dim: int, coefficients, init, noise_sigma: float = 0.0,
                 seed: int = 0, bound: float = 1e6,
                 name: str | None = None) -> TimeSeries:
    """Emit init, then iterate the polynomial delay map out to length n."""
    spec = PolyMapSpec(n=n, dim=dim, coefficients=tuple(coefficients),
                       init=tuple(init), noise_sigma=noise_sigma, seed=seed,
                       bound=bound)
    if spec.n < 2:
        raise ValueError("a standalone map series needs n >= 2")
    if spec.n < len(spec.init):
        raise ValueError(f"n={spec.n} is shorter than init ({len(spec.init)} values)")
    new = continue_poly_map(spec.init, spec.coefficients, spec.dim,
                            spec.n - len(spec.init), spec.noise_sigma,
                            spec.seed, spec.bound, step_offset=len(spec.init))
    values = np.concatenate([np.asarray(spec.init, dtype=float), new])
    return TimeSeries(name or f"polymap-s{seed}", _index_dates(n), values)


def _spec_values(spec) -> np.ndarray:
    if isinstance(spec, RandomWalkSpec):
        return _walk_values(spec.n, spec.sigma, spec.x0, spec.seed)
    if isinstance(spec, PolyMapSpec):
        if spec.init is None:
            raise ValueError("a standalone poly map spec needs init values")
        if spec.n < len(spec.init):
            raise ValueError(f"n={spec.n} is shorter than init ({len(spec.init)} values)")
        new = continue_poly_map(spec.init, spec.coefficients, spec.dim,
                                spec.n - len(spec.init), spec.noise_sigma,
                                spec.seed, spec.bound, step_offset=len(spec.init))
        return np.concatenate([np.asarray(spec.init, dtype=float), new])
    raise ValueError(f"unknown generator spec {spec!r}")


def _continue_values(history: np.ndarray, spec, step_offset: int) -> np.ndarray:
    if isinstance(spec, RandomWalkSpec):
        return _continue_walk(float(history[-1]), spec.n, spec.sigma, spec.seed)
    if isinstance(spec, PolyMapSpec):
        return continue_poly_map(history, spec.coefficients, spec.dim, spec.n,
                                 spec.noise_sigma, spec.seed, spec.bound,
                                 step_offset=step_offset)
    raise ValueError(f"unknown generator spec {spec!r}")


def gen_spliced(first, second, splice_index: int | None = None,
                name: str = "spliced") -> SplicedSeries:
    """Concatenate two generated segments with a level-continuous splice.

    The second generator continues from the first segment's tail (its own
    x0/init is ignored), so there is no level jump at the handover.
    Returns the series and the true changepoint: the first index governed
    by the second spec.
    """
    spec = SplicedSpec(first=first, second=second,
                       splice_index=first.n if splice_index is None else splice_index)
    a = _spec_values(first)
    b = _continue_values(a, second, step_offset=spec.splice_index)
    values = np.concatenate([a, b])
    series = TimeSeries(name, _index_dates(spec.n), values)
    return SplicedSeries(series=series, changepoint=spec.splice_index)


def generate(spec, name: str | None = None) -> TimeSeries:
    """Build the series described by any generator spec."""
    if isinstance(spec, SplicedSpec):
        return gen_spliced(spec.first, spec.second, spec.splice_index,
                           name=name or "spliced").series
    values = _spec_values(spec)
    return TimeSeries(name or f"{spec.kind}-s{spec.seed}",
                      _index_dates(spec.n), values)


def logistic_map_coefficients(r: float) -> tuple[float, float, float]:
    """v(t+1) = r v (1 - v): a dim-1, degree-2 coefficient vector."""
    return (0.0, float(r), -float(r))


def henon_map_coefficients(a: float = 1.4, b: float = 0.3) -> tuple[float, ...]:
    """v(t+1) = 1 - a v1^2 + b v2 (dim 2, degree 2), chaotic at defaults."""
    return (1.0, 0.0, float(b), -float(a), 0.0, 0.0)


def chaotic_quad_map_coefficients(dim: int, a: float = 1.76,
                                  b: float = 0.1) -> tuple[float, ...]:
    """v(t+1) = a - v_{dim-1}^2 - b v_dim for dim >= 2.

    A standard family of bounded chaotic quadratic delay maps whose
    memory genuinely spans all dim lags, which keeps the embedded feature
    matrix well conditioned for coefficient-recovery checks.
    """
    if dim < 2:
        raise ValueError("this family needs dim >= 2")
    terms = monomial_terms(dim, 2)
    index = {t: i for i, t in enumerate(terms)}
    out = [0.0] * len(terms)
    out[index[()]] = float(a)
    out[index[(dim - 1,)]] = -float(b)
    out[index[(dim - 2, dim - 2)]] = -1.0
    return tuple(out)


def rescale_map_coefficients(coefficients, dim: int, level: float,
                             scale: float) -> tuple[float, ...]:
    """Conjugate a polynomial delay map by the affine change v = level + scale*u.

    If the base coefficients define u(t+1) = G(u delay vector), the result
    defines H with H(v) = level + scale * G((v - level) / scale) applied
    componentwise, so the dynamics are identical up to units.  Useful for
    placing a bounded map at a series' local level and amplitude.
    """
    coefficients = np.asarray(coefficients, dtype=float)
    degree = _infer_degree(dim, coefficients.size)
    terms = monomial_terms(dim, degree)
    index = {t: i for i, t in enumerate(terms)}
    mu = float(level)
    s = float(scale)
    if s == 0.0 or not (np.isfinite(mu) and np.isfinite(s)):
        raise ValueError("scale must be nonzero and level/scale finite")
    out = np.zeros_like(coefficients)
    for c, term in zip(coefficients, terms):
        partial: dict[tuple[int, ...], float] = {(): float(c)}
        for i in term:
            grown: dict[tuple[int, ...], float] = {}
            for mono, w in partial.items():
                up = tuple(sorted(mono + (i,)))
                grown[up] = grown.get(up, 0.0) + w / s
                grown[mono] = grown.get(mono, 0.0) - w * mu / s
            partial = grown
        for mono, w in partial.items():
            out[index[mono]] += w
    out *= s
    out[0] += mu
    return tuple(float(x) for x in out)
