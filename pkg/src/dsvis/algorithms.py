"""Value preserving data point selection: EveryNth, MinMax, M4 and LTTB.

Every algorithm maps ``(series, n_out)`` to a strictly increasing int64 array
of selected sample indices. Bucketed algorithms accept ``binning="index"``
(equal sample counts) or ``binning="x"`` (equal-width x intervals).
"""
from __future__ import annotations

import numbers
from dataclasses import dataclass

import numba
import numpy as np

from .errors import InvalidNOutError, TooShortError, UnknownAlgorithmError
from .series import Binning, TimeSeries, bucket_bounds

__all__ = [
    "ALGORITHMS",
    "DownsampleSpec",
    "downsample",
    "every_nth",
    "lttb",
    "m4",
    "materialize",
    "min_max",
    "min_n_out",
    "parse_algorithm",
]

ALGORITHMS = ("everynth", "minmax", "m4", "lttb")
DISPLAY_NAMES = {"everynth": "EveryNth", "minmax": "MinMax", "m4": "M4", "lttb": "LTTB"}
_MIN_N_OUT = {"everynth": 1, "minmax": 2, "m4": 4, "lttb": 3}
_MULTIPLE = {"everynth": 1, "minmax": 2, "m4": 4, "lttb": 1}


def parse_algorithm(name: str) -> str:
    """Canonical lower-case algorithm id for names like ``"MinMax"`` or ``"every-nth"``."""
    key = str(name).lower().replace("-", "").replace("_", "")
    if key not in ALGORITHMS:
        raise UnknownAlgorithmError(f"unknown algorithm {name!r}; choose from {', '.join(ALGORITHMS)}")
    return key


def min_n_out(algorithm: str) -> int:
    return _MIN_N_OUT[parse_algorithm(algorithm)]


def check_n_out(algorithm: str, n_out, n: int | None = None) -> int:
    """Validate ``n_out`` for ``algorithm`` (and series length ``n``) and return it as int."""
    algorithm = parse_algorithm(algorithm)
    if isinstance(n_out, bool) or not isinstance(n_out, numbers.Integral):
        raise InvalidNOutError(f"n_out must be an integer, got {n_out!r}")
    n_out = int(n_out)
    name = DISPLAY_NAMES[algorithm]
    lo = _MIN_N_OUT[algorithm]
    if n_out < lo:
        raise InvalidNOutError(f"{name} needs n_out >= {lo}, got {n_out}")
    mult = _MULTIPLE[algorithm]
    if n_out % mult:
        raise InvalidNOutError(f"{name} needs n_out divisible by {mult}, got {n_out}")
    if n is not None and n_out > n:
        raise InvalidNOutError(f"n_out={n_out} exceeds the series length {n}")
    return n_out


@dataclass(frozen=True)
class DownsampleSpec:
    algorithm: str
    n_out: int
    binning: Binning = "index"

    def __post_init__(self):
        object.__setattr__(self, "algorithm", parse_algorithm(self.algorithm))
        check_n_out(self.algorithm, self.n_out)
        if self.binning not in ("index", "x"):
            raise ValueError(f"binning must be 'index' or 'x', got {self.binning!r}")

    @property
    def name(self) -> str:
        return DISPLAY_NAMES[self.algorithm]


# --------------------------------------------------------------------------- kernels


@numba.njit(cache=True)
def _minmax_kernel(y, bounds):
    n_buckets = bounds.shape[0] - 1
    out = np.empty(2 * n_buckets, dtype=np.int64)
    k = 0
    for b in range(n_buckets):
        lo = bounds[b]
        hi = bounds[b + 1]
        imin = lo
        imax = lo
        vmin = y[lo]
        vmax = y[lo]
        for i in range(lo + 1, hi):
            v = y[i]
            if v < vmin:
                vmin = v
                imin = i
            elif v > vmax:
                vmax = v
                imax = i
        if imin < imax:
            out[k] = imin
            out[k + 1] = imax
            k += 2
        elif imax < imin:
            out[k] = imax
            out[k + 1] = imin
            k += 2
        else:
            out[k] = imin
            k += 1
    return out[:k]


@numba.njit(cache=True)
def _m4_kernel(y, bounds):
    n_buckets = bounds.shape[0] - 1
    out = np.empty(4 * n_buckets, dtype=np.int64)
    k = 0
    for b in range(n_buckets):
        lo = bounds[b]
        hi = bounds[b + 1]
        imin = lo
        imax = lo
        vmin = y[lo]
        vmax = y[lo]
        for i in range(lo + 1, hi):
            v = y[i]
            if v < vmin:
                vmin = v
                imin = i
            elif v > vmax:
                vmax = v
                imax = i
        # lo <= min(imin, imax) and max(imin, imax) <= hi - 1: only the middle pair may be out of order
        a = imin if imin < imax else imax
        c = imax if imin < imax else imin
        out[k] = lo
        k += 1
        if a != lo:
            out[k] = a
            k += 1
        if c != a:
            out[k] = c
            k += 1
        if hi - 1 != c:
            out[k] = hi - 1
            k += 1
    return out[:k]


@numba.njit(cache=True)
def _lttb_kernel(x, y, bounds):
    # bounds: edges of the interior buckets, bounds[0] == 1, bounds[-1] == N - 1
    n = x.shape[0]
    n_buckets = bounds.shape[0] - 1
    out = np.empty(n_buckets + 2, dtype=np.int64)
    out[0] = 0
    a = 0
    for b in range(n_buckets):
        lo = bounds[b]
        hi = bounds[b + 1]
        if b < n_buckets - 1:
            nlo = bounds[b + 1]
            nhi = bounds[b + 2]
            sx = 0.0
            sy = 0.0
            for j in range(nlo, nhi):
                sx += x[j]
                sy += y[j]
            cx = sx / (nhi - nlo)
            cy = sy / (nhi - nlo)
        else:
            cx = x[n - 1]
            cy = y[n - 1]
        xa = x[a]
        ya = y[a]
        best = lo
        best_area = -1.0
        for j in range(lo, hi):
            area = 0.5 * abs(xa * (y[j] - cy) + x[j] * (cy - ya) + cx * (ya - y[j]))
            if area > best_area:
                best_area = area
                best = j
        out[b + 1] = best
        a = best
    out[n_buckets + 1] = n - 1
    return out


# --------------------------------------------------------------------------- public API


def every_nth(series: TimeSeries, n_out: int) -> np.ndarray:
    """Indices ``0, s, 2s, ...`` with ``s = N // n_out``, truncated to ``n_out`` entries.

    Runs in O(n_out): the sample values are never touched.
    """
    n = len(series)
    n_out = check_n_out("everynth", n_out, n)
    return np.arange(n_out, dtype=np.int64) * (n // n_out)


def min_max(series: TimeSeries, n_out: int, binning: Binning = "index") -> np.ndarray:
    """Per bucket (``n_out // 2`` of them) the first minimum and first maximum.

    A bucket whose minimum and maximum share an index contributes one point.
    """
    n_out = check_n_out("minmax", n_out, len(series))
    bounds = bucket_bounds(series.x, n_out // 2, binning)
    return _minmax_kernel(series.y, bounds)


def m4(series: TimeSeries, n_out: int, binning: Binning = "index") -> np.ndarray:
    """Per bucket (``n_out // 4`` of them) the first, last, minimum and maximum sample.

    Coinciding roles are emitted once, so buckets contribute 1 to 4 points.
    """
    n_out = check_n_out("m4", n_out, len(series))
    bounds = bucket_bounds(series.x, n_out // 4, binning)
    return _m4_kernel(series.y, bounds)


def lttb(series: TimeSeries, n_out: int, binning: Binning = "index") -> np.ndarray:
    """Largest-Triangle-Three-Buckets.

    The first and last samples are always kept. The ``N - 2`` interior samples
    are split into ``n_out - 2`` buckets; walking left to right, each bucket
    keeps the sample spanning the largest triangle with the previously kept
    sample and the centroid of the next bucket (the last sample for the final
    bucket). Equal areas resolve to the lowest index.
    """
    n = len(series)
    n_out = check_n_out("lttb", n_out, n)
    interior = bucket_bounds(series.x[1:-1], n_out - 2, binning) + 1
    return _lttb_kernel(series.x, series.y, interior)


_DISPATCH = {"minmax": min_max, "m4": m4, "lttb": lttb}


def downsample(series: TimeSeries, spec: DownsampleSpec) -> np.ndarray:
    """Run the algorithm described by ``spec`` on ``series``."""
    if spec.algorithm == "everynth":
        return every_nth(series, spec.n_out)
    return _DISPATCH[spec.algorithm](series, spec.n_out, spec.binning)


def materialize(series: TimeSeries, selection) -> TimeSeries:
    """The sub-series at ``selection`` (strictly increasing indices)."""
    idx = np.asarray(selection, dtype=np.int64)
    if idx.ndim != 1:
        raise IndexError("a selection is a one-dimensional index array")
    if idx.shape[0] < 2:
        raise TooShortError("a selection needs at least 2 indices to form a series")
    if idx[0] < 0 or idx[-1] >= len(series) or not (np.diff(idx) > 0).all():
        raise IndexError("selection indices must be strictly increasing and within the series")
    return TimeSeries._trusted(series.x[idx], series.y[idx])
