"""Time series container, validation, view slicing and bucket partitioning."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import (
    EmptyViewError,
    InvalidBucketCountError,
    LengthMismatchError,
    NonFiniteValueError,
    NonMonotonicXError,
    TooShortError,
    ValidationError,
)

__all__ = [
    "Binning",
    "BucketPartition",
    "TimeSeries",
    "bucket_bounds",
    "partition",
    "slice_view",
    "validate",
]

Binning = Literal["index", "x"]
BINNINGS = ("index", "x")


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=np.float64).view()
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """Strictly x-ordered samples ``(x[i], y[i])``.

    Construct through :func:`validate` (or the constructor, which validates);
    the arrays are stored read-only as float64.
    """

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        x, y = _check(self.x, self.y)
        object.__setattr__(self, "x", _readonly(x.copy()))
        object.__setattr__(self, "y", _readonly(y.copy()))

    @classmethod
    def _trusted(cls, x: np.ndarray, y: np.ndarray) -> TimeSeries:
        # Sub-series of an already validated series; skips the O(N) checks.
        obj = object.__new__(cls)
        object.__setattr__(obj, "x", _readonly(x))
        object.__setattr__(obj, "y", _readonly(y))
        return obj

    def __len__(self) -> int:
        return self.x.shape[0]

    def __eq__(self, other):
        if not isinstance(other, TimeSeries):
            return NotImplemented
        return np.array_equal(self.x, other.x) and np.array_equal(self.y, other.y)

    __hash__ = None

    @property
    def span(self) -> float:
        return float(self.x[-1] - self.x[0])

    def __repr__(self):
        return f"TimeSeries(N={len(self)}, x=[{self.x[0]:g}..{self.x[-1]:g}])"


def _check(x, y) -> tuple[np.ndarray, np.ndarray]:
    try:
        x = np.asarray(x, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"series values must be real numbers: {exc}") from None
    if x.ndim != 1 or y.ndim != 1:
        raise ValidationError("x and y must be one-dimensional")
    if x.shape[0] != y.shape[0]:
        raise LengthMismatchError(f"len(x)={x.shape[0]} != len(y)={y.shape[0]}")
    if x.shape[0] < 2:
        raise TooShortError(f"a series needs at least 2 samples, got {x.shape[0]}")
    if not (np.isfinite(x).all() and np.isfinite(y).all()):
        raise NonFiniteValueError("x and y must be finite (no NaN or infinity)")
    if not (np.diff(x) > 0).all():
        raise NonMonotonicXError("x must be strictly increasing")
    return x, y


def validate(x, y=None) -> TimeSeries:
    """Return a validated :class:`TimeSeries`.

    ``x`` may also be an existing ``TimeSeries`` (returned unchanged) or, when
    ``y`` is omitted, a sequence of values with implicit positions ``0..N-1``.
    """
    if isinstance(x, TimeSeries) and y is None:
        return x
    if y is None:
        y = np.asarray(x, dtype=np.float64)
        x = np.arange(y.shape[0], dtype=np.float64)
    return TimeSeries(x, y)


@dataclass(frozen=True, eq=False)
class BucketPartition:
    """Contiguous, ordered, non-empty index ranges covering ``[0, N)``.

    ``bounds`` holds ``count + 1`` edges; bucket ``i`` is
    ``range(bounds[i], bounds[i + 1])``.
    """

    bounds: np.ndarray

    @property
    def count(self) -> int:
        return self.bounds.shape[0] - 1

    @property
    def ranges(self) -> list[tuple[int, int]]:
        b = self.bounds.tolist()
        return list(zip(b[:-1], b[1:]))

    def sizes(self) -> np.ndarray:
        return np.diff(self.bounds)


def bucket_bounds(x: np.ndarray, bucket_count: int, policy: Binning = "index") -> np.ndarray:
    """Bucket edges for ``len(x)`` samples as an int64 array.

    Index binning gives near-equal runs with the larger buckets first. X binning
    cuts ``[x[0], x[-1]]`` into ``bucket_count`` equal-width intervals, sample
    ``i`` falling in interval ``floor((x[i] - x[0]) * bucket_count / span)``
    (the last sample is folded into the last interval); intervals without
    samples are dropped, which merges them into their right neighbour.
    Membership is exact for integer-valued positions; otherwise a sample
    within rounding error of an edge goes wherever the float expression puts it.
    """
    n = x.shape[0]
    if not 1 <= bucket_count <= n:
        raise InvalidBucketCountError(f"bucket count must be in [1, {n}], got {bucket_count}")
    if policy == "index":
        q, rem = divmod(n, bucket_count)
        sizes = np.full(bucket_count, q, dtype=np.int64)
        sizes[:rem] += 1
        return np.concatenate(([0], np.cumsum(sizes)))
    if policy == "x":
        if n == 1:
            return np.array([0, 1], dtype=np.int64)
        span = x[-1] - x[0]
        # Keep this expression in sync with the renderer's x -> pixel mapping.
        pos = (x - x[0]) * bucket_count / span
        idx = np.minimum(np.floor(pos).astype(np.int64), bucket_count - 1)
        starts = np.flatnonzero(np.diff(idx)) + 1
        return np.concatenate(([0], starts, [n])).astype(np.int64)
    raise ValueError(f"unknown binning policy {policy!r}; expected one of {BINNINGS}")


def partition(series: TimeSeries, bucket_count: int, policy: Binning = "index") -> BucketPartition:
    """Split the sample indices of ``series`` into buckets."""
    return BucketPartition(bucket_bounds(series.x, bucket_count, policy))


def slice_view(series: TimeSeries, start_x: float, end_x: float) -> TimeSeries:
    """Samples with ``start_x <= x <= end_x``, order preserved."""
    if not start_x < end_x:
        raise EmptyViewError(f"view start {start_x} must be below end {end_x}")
    lo = int(np.searchsorted(series.x, start_x, side="left"))
    hi = int(np.searchsorted(series.x, end_x, side="right"))
    if hi - lo < 2:
        raise EmptyViewError(f"view [{start_x}, {end_x}] holds {max(hi - lo, 0)} samples, need 2")
    if lo == 0 and hi == len(series):
        return series
    return TimeSeries._trusted(series.x[lo:hi], series.y[lo:hi])
