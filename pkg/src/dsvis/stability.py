"""Data-space visual stability under pan and zoom updates.

A view is an x interval ``(x_start, x_end)``; an update moves its edges by
``delta_left * span`` and ``delta_right * span`` with ``span = x_end -
x_start``. Both views are downsampled with the same spec, the updated
selection is linearly interpolated at the original selection's x positions
inside their common x range, and the residuals are scored as MAE (all pairs)
and MAEP (pairs at strict local extrema of the original selection), both
divided by the original selection's y range.

Views built with :func:`sample_view` extend half a sample gap past their end
samples, so a view of ``n`` evenly spaced samples has ``span == n`` gaps and a
ratio ``d`` shifts it by ``d * n`` samples.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .algorithms import DownsampleSpec, downsample, materialize
from .errors import (
    EmptyIntersectionError,
    InsufficientOverlapError,
    InvalidViewUpdateError,
    NoPairsError,
    NoPeaksError,
    OutOfDomainError,
)
from .series import TimeSeries, slice_view

__all__ = [
    "OFFSET_SUITE",
    "Pairs",
    "StabilityScores",
    "UPDATE_KINDS",
    "ViewUpdate",
    "apply_update",
    "evaluate_stability",
    "intersect_and_interpolate",
    "mae",
    "maep",
    "offset_suite",
    "sample_view",
    "stability_scores",
    "update_suite",
]

OFFSET_SUITE = (
    Fraction(1, 53),
    Fraction(1, 27),
    Fraction(1, 17),
    Fraction(1, 11),
    Fraction(3, 23),
    Fraction(2, 11),
)
UPDATE_KINDS = ("pan", "zoom-in", "zoom-out")


def offset_suite() -> list[Fraction]:
    """Offset ratios whose denominators share no factor with 10, so shifted bins rarely realign."""
    return list(OFFSET_SUITE)


def _fmt(d) -> str:
    return str(d) if isinstance(d, (Fraction, int)) else f"{d:.9g}"


@dataclass(frozen=True)
class ViewUpdate:
    """Edge offsets of a pan (equal deltas) or a zoom, as ratios of the view span."""

    delta_left: float | Fraction
    delta_right: float | Fraction

    def __post_init__(self):
        self.kind  # validates

    @property
    def kind(self) -> str:
        dl, dr = self.delta_left, self.delta_right
        if dl == 0 and dr == 0:
            raise InvalidViewUpdateError("a view update needs at least one non-zero delta")
        if dl == dr:
            return "pan"
        if dl >= 0 >= dr:
            return "zoom-in"
        if dl <= 0 <= dr:
            return "zoom-out"
        raise InvalidViewUpdateError(
            f"deltas ({_fmt(dl)}, {_fmt(dr)}) are neither a pan nor a zoom"
        )

    @property
    def label(self) -> str:
        return f"{_fmt(self.delta_left)}:{_fmt(self.delta_right)}"


def update_suite(offsets=OFFSET_SUITE, kinds=UPDATE_KINDS) -> list[ViewUpdate]:
    """Updates built from ``offsets`` for each kind.

    Pans use every offset in both directions. Zoom-ins combine a left delta in
    ``{0} + offsets`` with a right delta in ``{0} - offsets`` (zoom-outs the
    mirror image), skipping the all-zero pair.
    """
    updates = []
    for kind in kinds:
        if kind == "pan":
            for o in offsets:
                updates += [ViewUpdate(o, o), ViewUpdate(-o, -o)]
        elif kind in ("zoom-in", "zoom-out"):
            sign = 1 if kind == "zoom-in" else -1
            sides = [0] + [sign * o for o in offsets]
            for dl in sides:
                for dr in sides:
                    if dl == 0 and dr == 0:
                        continue
                    updates.append(ViewUpdate(dl, -dr))
        else:
            raise InvalidViewUpdateError(f"unknown update kind {kind!r}; expected {UPDATE_KINDS}")
    return updates


def _gap(series: TimeSeries, i: int) -> float:
    return float(series.x[i + 1] - series.x[i])


def sample_view(series: TimeSeries, start: int = 0, count: int | None = None) -> tuple[float, float]:
    """View holding samples ``start .. start + count - 1``, padded by half a gap each side."""
    n = len(series)
    count = n - start if count is None else count
    end = start + count - 1
    if start < 0 or count < 2 or end >= n:
        raise OutOfDomainError(f"samples [{start}, {end}] are not inside [0, {n - 1}]")
    left = series.x[start] - 0.5 * _gap(series, start - 1 if start > 0 else 0)
    right = series.x[end] + 0.5 * _gap(series, end if end < n - 1 else n - 2)
    return float(left), float(right)


def apply_update(series: TimeSeries, view: tuple[float, float], update: ViewUpdate,
                 clamp: bool = False) -> tuple[float, float]:
    """Edges of ``view`` after ``update``.

    A view leaves the domain when it would need a sample beyond either end of
    ``series`` (it reaches one sample gap past the outermost sample). With
    ``clamp`` such a view is shifted back inside when it fits; otherwise, or if
    it cannot fit, :class:`OutOfDomainError` is raised.
    """
    start, end = view
    span = end - start
    new_start = start + float(update.delta_left) * span
    new_end = end + float(update.delta_right) * span
    lo = series.x[0] - _gap(series, 0)
    hi = series.x[-1] + _gap(series, len(series) - 2)
    outside = new_start <= lo or new_end >= hi
    if outside:
        if not clamp or new_end - new_start >= hi - lo:
            raise OutOfDomainError(
                f"view [{new_start:g}, {new_end:g}] leaves the data domain [{series.x[0]:g}, {series.x[-1]:g}]"
            )
        if new_start <= lo:
            shift = series.x[0] - new_start
        else:
            shift = series.x[-1] - new_end
        new_start += shift
        new_end += shift
    if new_start >= end or new_end <= start:
        raise EmptyIntersectionError(f"view [{new_start:g}, {new_end:g}] misses [{start:g}, {end:g}]")
    slice_view(series, new_start, new_end)  # raises EmptyViewError below 2 samples
    return float(new_start), float(new_end)


class Pairs(NamedTuple):
    """Original selection values and interpolated updated values at shared x."""

    x: np.ndarray
    y_original: np.ndarray
    y_updated: np.ndarray
    index: np.ndarray  # positions within the original downsampled series


def intersect_and_interpolate(original_ds: TimeSeries, updated_ds: TimeSeries) -> Pairs:
    """Pair every original sample inside the common x range with the updated polyline's value there."""
    lo = max(original_ds.x[0], updated_ds.x[0])
    hi = min(original_ds.x[-1], updated_ds.x[-1])
    i0 = int(np.searchsorted(original_ds.x, lo, side="left"))
    i1 = int(np.searchsorted(original_ds.x, hi, side="right"))
    if lo > hi or i1 <= i0:
        raise InsufficientOverlapError(
            f"no original sample in the overlap [{lo:g}, {hi:g}] of the two selections"
        )
    index = np.arange(i0, i1)
    x = original_ds.x[i0:i1]
    return Pairs(x, original_ds.y[i0:i1], np.interp(x, updated_ds.x, updated_ds.y), index)


def _normalized_errors(pairs: Pairs, normalization_range: float) -> np.ndarray:
    err = np.abs(pairs.y_original - pairs.y_updated)
    return err / normalization_range if normalization_range > 0 else err


def mae(pairs: Pairs, normalization_range: float) -> float:
    """Mean absolute residual over ``normalization_range`` (raw when the range is 0)."""
    if pairs.x.shape[0] == 0:
        raise NoPairsError("no pairs to score")
    return float(np.mean(_normalized_errors(pairs, normalization_range)))


def peak_mask(y: np.ndarray) -> np.ndarray:
    """Strict local maxima and minima (plateaus and end points excluded)."""
    peaks = np.zeros(y.shape[0], dtype=bool)
    mid, left, right = y[1:-1], y[:-2], y[2:]
    peaks[1:-1] = ((mid > left) & (mid > right)) | ((mid < left) & (mid < right))
    return peaks


def maep(pairs: Pairs, original_ds: TimeSeries, normalization_range: float) -> float:
    """:func:`mae` restricted to pairs at peaks of the original selection."""
    at_peak = peak_mask(original_ds.y)[pairs.index]
    if not at_peak.any():
        raise NoPeaksError("the original selection has no strict local extremum in the overlap")
    return float(np.mean(_normalized_errors(pairs, normalization_range)[at_peak]))


@dataclass(frozen=True)
class StabilityScores:
    mae: float
    maep: float | None  # None when the original selection has no peak in the overlap
    peak_count: int


def stability_scores(original_ds: TimeSeries, updated_ds: TimeSeries) -> StabilityScores:
    """MAE and MAEP of ``updated_ds`` against ``original_ds``.

    A constant original selection has no peaks; its MAEP falls back to the
    MAE (raw residuals), which is 0 whenever the update is constant too.
    """
    pairs = intersect_and_interpolate(original_ds, updated_ds)
    rng = float(np.ptp(original_ds.y))
    err = mae(pairs, rng)
    peaks = int(np.count_nonzero(peak_mask(original_ds.y)[pairs.index]))
    if rng == 0:
        return StabilityScores(err, err, peaks)
    if peaks == 0:
        return StabilityScores(err, None, 0)
    return StabilityScores(err, maep(pairs, original_ds, rng), peaks)


def downsampled_view(series: TimeSeries, view: tuple[float, float], spec: DownsampleSpec) -> TimeSeries:
    sub = slice_view(series, *view)
    return materialize(sub, downsample(sub, spec))


def evaluate_stability(series: TimeSeries, spec: DownsampleSpec, update: ViewUpdate,
                       initial_view: tuple[float, float] | None = None,
                       clamp: bool = False) -> StabilityScores:
    """Stability of ``spec`` when ``initial_view`` (default: all samples) receives ``update``."""
    view = initial_view or sample_view(series)
    new_view = apply_update(series, view, update, clamp=clamp)
    return stability_scores(downsampled_view(series, view, spec),
                            downsampled_view(series, new_view, spec))
