"""Deterministic grayscale line-chart rasterizer.

The chart is the plot area only: no axes, ticks or labels. The polyline is
stroked with an axis-aligned square pen of side ``line_width`` (the Minkowski
sum of the polyline and the square). Because x is strictly increasing, the
stroke meets every vertical line ``x = xs`` in a single interval
``[min y - r, max y + r]``, taken over the polyline restricted to
``[xs - r, xs + r]``. The renderer evaluates that interval exactly for each
sample column and counts the covered sample rows.

Pixel space: column ``c`` spans ``[c, c + 1)`` and row ``r`` spans
``[r, r + 1)`` from the top. The x range maps onto the pixel edges
``[0, width]`` and the y range onto the row centres ``[height - 0.5, 0.5]``
(y grows upward).

Aliased mode samples each pixel centre once and sets covered pixels to 255.
Anti-aliased mode samples a regular ``supersample x supersample`` grid per
pixel and writes ``round(255 * covered / samples)``, rounding halves up.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from pathlib import Path

import numba
import numpy as np

from .algorithms import DownsampleSpec
from .errors import InvalidConfigError, ParseError
from .series import TimeSeries

__all__ = [
    "RasterImage",
    "RenderConfig",
    "pixel_column_binning",
    "pixel_perfect_m4_spec",
    "render",
]


@dataclass(frozen=True)
class RenderConfig:
    canvas_width: int = 800
    canvas_height: int = 250
    line_width: float = 2.0
    antialias: bool = True
    y_range: tuple[float, float] | None = None
    x_range: tuple[float, float] | None = None
    supersample: int = 16

    def __post_init__(self):
        for name in ("canvas_width", "canvas_height", "supersample"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)) or v < 1:
                raise InvalidConfigError(f"{name} must be a positive integer, got {v!r}")
        if not (math.isfinite(self.line_width) and self.line_width >= 1):
            raise InvalidConfigError(f"line_width must be >= 1, got {self.line_width!r}")
        for name in ("y_range", "x_range"):
            rng = getattr(self, name)
            if rng is None:
                continue
            lo, hi = (float(v) for v in rng)
            if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
                raise InvalidConfigError(f"{name} must satisfy min < max, got {rng!r}")
            object.__setattr__(self, name, (lo, hi))

    def sharing_axes_with(self, series: TimeSeries) -> RenderConfig:
        """Copy with an auto y range pinned to ``series``, for rendering comparisons.

        The x axis is left alone: every chart spans its own first to last
        sample. A constant ``series`` keeps an auto y range; any selection of
        it is constant too and lands on the same mid-height row.
        """
        if self.y_range is not None:
            return self
        lo, hi = float(series.y.min()), float(series.y.max())
        return replace(self, y_range=(lo, hi)) if lo < hi else self


@dataclass(frozen=True, eq=False)
class RasterImage:
    """Row-major ``(height, width)`` uint8 illumination grid, background 0."""

    pixels: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.pixels)
        if p.ndim != 2:
            raise ValueError("pixels must be a 2-D array")
        if p.dtype != np.uint8:
            if p.size and (p.min() < 0 or p.max() > 255):
                raise ValueError("pixel values must lie in [0, 255]")
            p = p.astype(np.uint8)
        p = p.view()
        p.flags.writeable = False
        object.__setattr__(self, "pixels", p)

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    def __eq__(self, other):
        if not isinstance(other, RasterImage):
            return NotImplemented
        return np.array_equal(self.pixels, other.pixels)

    __hash__ = None

    def to_pgm_bytes(self) -> bytes:
        header = f"P5\n{self.width} {self.height}\n255\n".encode("ascii")
        return header + np.ascontiguousarray(self.pixels).tobytes()

    def save_pgm(self, path) -> None:
        Path(path).write_bytes(self.to_pgm_bytes())

    @classmethod
    def from_pgm_bytes(cls, data: bytes) -> RasterImage:
        parts = data.split(maxsplit=4)
        if len(parts) < 4 or parts[0] != b"P5":
            raise ParseError("not a binary PGM (P5) image")
        try:
            w, h, maxval = int(parts[1]), int(parts[2]), int(parts[3])
        except ValueError:
            raise ParseError("malformed PGM header") from None
        if maxval != 255:
            raise ParseError(f"unsupported PGM maxval {maxval}")
        body = parts[4] if len(parts) == 5 else b""
        # Exactly one whitespace byte follows maxval; split() consumed it.
        if len(body) != w * h:
            raise ParseError(f"PGM body has {len(body)} bytes, expected {w * h}")
        return cls(np.frombuffer(body, dtype=np.uint8).reshape(h, w))

    @classmethod
    def load_pgm(cls, path) -> RasterImage:
        return cls.from_pgm_bytes(Path(path).read_bytes())


def to_pixel_space(series: TimeSeries, config: RenderConfig) -> tuple[np.ndarray, np.ndarray]:
    """Vertex positions in pixel units (x to the right, y down from the top edge)."""
    w, h = config.canvas_width, config.canvas_height
    x0, x1 = config.x_range or (series.x[0], series.x[-1])
    span = x1 - x0
    # Same expression as x binning in series.bucket_bounds: keeps bins on columns.
    px = (series.x - x0) * w / span
    if config.y_range is not None:
        lo, hi = config.y_range
    else:
        lo, hi = float(series.y.min()), float(series.y.max())
    if hi > lo:
        py = (h - 0.5) - (series.y - lo) / (hi - lo) * (h - 1)
    else:
        py = np.full(series.y.shape[0], h // 2 + 0.5)
    return px, py


@numba.njit(cache=True)
def _interp_at(px, py, i, xq):
    # i: segment start with px[i] <= xq <= px[i + 1]
    if px[i] == xq:
        return py[i]
    if px[i + 1] == xq:
        return py[i + 1]
    return py[i] + (xq - px[i]) * (py[i + 1] - py[i]) / (px[i + 1] - px[i])


@numba.njit(cache=True)
def _coverage_kernel(px, py, width, height, s, r):
    n = px.shape[0]
    counts = np.zeros((height, width), dtype=np.int64)
    n_rows = height * s
    seg_l = 0
    seg_r = 0
    v_lo = 0
    v_hi = 0
    for j in range(width * s):
        xs = (j + 0.5) / s
        wl = xs - r
        wr = xs + r
        if wr < px[0] or wl > px[n - 1]:
            continue
        if wl < px[0]:
            wl = px[0]
        if wr > px[n - 1]:
            wr = px[n - 1]
        while seg_l < n - 2 and px[seg_l + 1] <= wl:
            seg_l += 1
        while seg_r < n - 2 and px[seg_r + 1] <= wr:
            seg_r += 1
        y_l = _interp_at(px, py, seg_l, wl)
        y_r = _interp_at(px, py, seg_r, wr)
        lo = min(y_l, y_r)
        hi = max(y_l, y_r)
        while v_lo < n and px[v_lo] < wl:
            v_lo += 1
        if v_hi < v_lo:
            v_hi = v_lo
        while v_hi < n and px[v_hi] <= wr:
            v_hi += 1
        for v in range(v_lo, v_hi):
            if py[v] < lo:
                lo = py[v]
            elif py[v] > hi:
                hi = py[v]
        k0 = math.ceil((lo - r) * s - 0.5)
        k1 = math.floor((hi + r) * s - 0.5)
        if k0 < 0:
            k0 = 0
        if k1 > n_rows - 1:
            k1 = n_rows - 1
        if k1 < k0:
            continue
        col = j // s
        for row in range(k0 // s, k1 // s + 1):
            a = max(k0, row * s)
            b = min(k1, row * s + s - 1)
            counts[row, col] += b - a + 1
    return counts


def render(series: TimeSeries, config: RenderConfig | None = None) -> RasterImage:
    """Rasterize ``series`` as a line chart."""
    config = config or RenderConfig()
    s = config.supersample if config.antialias else 1
    px, py = to_pixel_space(series, config)
    counts = _coverage_kernel(
        px, py, config.canvas_width, config.canvas_height, s, config.line_width / 2.0
    )
    total = s * s
    pixels = (510 * counts + total) // (2 * total)
    return RasterImage(pixels.astype(np.uint8))


def pixel_column_binning(config: RenderConfig) -> int:
    """Bucket count that puts one x-bucket on every pixel column (the canvas width)."""
    return config.canvas_width


def pixel_perfect_m4_spec(config: RenderConfig) -> DownsampleSpec:
    """M4 with ``n_out = 4 * canvas_width`` and x binning aligned to pixel columns."""
    return DownsampleSpec("m4", 4 * pixel_column_binning(config), "x")
