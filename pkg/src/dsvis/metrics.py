"""Full-reference image metrics aggregated over an OR-conv mask.

The mask is the union of the non-zero pixels of both images, dilated with a
square all-ones kernel, so scores reflect the neighbourhood of the drawn line
instead of the canvas fill level. Pixel values are treated as reals in
[0, 255]; means use numpy's pairwise summation.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .algorithms import materialize
from .errors import (
    DimensionMismatchError,
    EmptyMaskError,
    EvenKernelError,
    ImageSmallerThanWindowError,
)
from .raster import RasterImage, RenderConfig, render
from .series import TimeSeries

__all__ = [
    "ReprScores",
    "SSIM_WINDOW",
    "dssim",
    "dssim_from_ssim",
    "evaluate_representativeness",
    "mse",
    "or_conv_mask",
    "pem",
    "pem20",
    "ssim_map",
]

SSIM_WINDOW = 11
SSIM_SIGMA = 1.5
SSIM_K1, SSIM_K2 = 0.01, 0.03
DATA_RANGE = 255.0
DEFAULT_KERNEL = 7


def _pixels(img) -> np.ndarray:
    if isinstance(img, RasterImage):
        img = img.pixels
    return np.asarray(img, dtype=np.float64)


def _pair(a, b) -> tuple[np.ndarray, np.ndarray]:
    a, b = _pixels(a), _pixels(b)
    if a.shape != b.shape:
        raise DimensionMismatchError(f"image shapes differ: {a.shape} vs {b.shape}")
    return a, b


def _masked(a, b, mask) -> tuple[np.ndarray, np.ndarray]:
    a, b = _pair(a, b)
    mask = np.asarray(mask, dtype=bool)
    if mask.shape != a.shape:
        raise DimensionMismatchError(f"mask shape {mask.shape} != image shape {a.shape}")
    if not mask.any():
        raise EmptyMaskError("the mask selects no pixels")
    return a[mask], b[mask]


def or_conv_mask(reference, candidate, kernel_size: int = DEFAULT_KERNEL) -> np.ndarray:
    """Boolean mask: non-zero pixels of either image, dilated by a k x k square.

    The dilation is clamped at the canvas border (nothing outside the canvas
    counts as drawn).
    """
    a, b = _pair(reference, candidate)
    if kernel_size < 1 or kernel_size % 2 == 0:
        raise EvenKernelError(f"kernel size must be a positive odd integer, got {kernel_size}")
    drawn = (a != 0) | (b != 0)
    if kernel_size == 1:
        return drawn
    return ndimage.binary_dilation(drawn, structure=np.ones((kernel_size, kernel_size), dtype=bool))


def mse(reference, candidate, mask) -> float:
    """Mean squared pixel difference over the masked pixels."""
    a, b = _masked(reference, candidate, mask)
    d = a - b
    return float(np.mean(d * d))


def pem(reference, candidate, mask, margin: float = 20) -> float:
    """Fraction of masked pixels whose absolute difference exceeds ``margin`` (strictly)."""
    a, b = _masked(reference, candidate, mask)
    return float(np.count_nonzero(np.abs(a - b) > margin) / a.shape[0])


def pem20(reference, candidate, mask) -> float:
    return pem(reference, candidate, mask, 20)


def _gaussian_window(size: int = SSIM_WINDOW, sigma: float = SSIM_SIGMA) -> np.ndarray:
    t = np.arange(size, dtype=np.float64) - (size - 1) / 2
    g = np.exp(-(t * t) / (2 * sigma * sigma))
    return g / g.sum()


def _filter_valid(img: np.ndarray, g: np.ndarray) -> np.ndarray:
    pad = g.shape[0] // 2
    out = ndimage.correlate1d(img, g, axis=0, mode="constant")
    out = ndimage.correlate1d(out, g, axis=1, mode="constant")
    return out[pad:-pad, pad:-pad] if pad else out


def ssim_map(reference, candidate) -> np.ndarray:
    """Per-pixel SSIM for every window that lies fully inside the image.

    Uses an 11 x 11 Gaussian window (sigma 1.5), K1 = 0.01, K2 = 0.03 and a
    dynamic range of 255. Entry ``[i, j]`` belongs to image pixel
    ``[i + 5, j + 5]``.
    """
    a, b = _pair(reference, candidate)
    if min(a.shape) < SSIM_WINDOW:
        raise ImageSmallerThanWindowError(
            f"image {a.shape} is smaller than the {SSIM_WINDOW}x{SSIM_WINDOW} SSIM window"
        )
    g = _gaussian_window()
    mu_a = _filter_valid(a, g)
    mu_b = _filter_valid(b, g)
    var_a = _filter_valid(a * a, g) - mu_a * mu_a
    var_b = _filter_valid(b * b, g) - mu_b * mu_b
    cov = _filter_valid(a * b, g) - mu_a * mu_b
    c1 = (SSIM_K1 * DATA_RANGE) ** 2
    c2 = (SSIM_K2 * DATA_RANGE) ** 2
    num = (2 * mu_a * mu_b + c1) * (2 * cov + c2)
    den = (mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2)
    return num / den


def dssim_from_ssim(ssim):
    """``(1 - ssim) / 2``: 0 for identical, 1 for perfectly anti-correlated."""
    return (1.0 - np.asarray(ssim, dtype=np.float64)) / 2.0


def dssim(reference, candidate, mask) -> float:
    """Mean DSSIM over masked pixels whose SSIM window fits inside the image."""
    a, b = _pair(reference, candidate)
    mask = np.asarray(mask, dtype=bool)
    if mask.shape != a.shape:
        raise DimensionMismatchError(f"mask shape {mask.shape} != image shape {a.shape}")
    smap = ssim_map(a, b)
    pad = SSIM_WINDOW // 2
    inner = mask[pad:-pad, pad:-pad]
    if not inner.any():
        raise EmptyMaskError("no masked pixel has a complete SSIM window")
    value = float(np.mean(dssim_from_ssim(smap[inner])))
    return min(max(value, 0.0), 1.0)


@dataclass(frozen=True)
class ReprScores:
    mse: float
    pem20: float
    dssim: float

    def as_dict(self) -> dict[str, float]:
        return {"mse": self.mse, "pem20": self.pem20, "dssim": self.dssim}


def compare_images(reference, candidate, kernel_size: int = DEFAULT_KERNEL) -> ReprScores:
    mask = or_conv_mask(reference, candidate, kernel_size)
    if not mask.any():
        # Nothing drawn in either image: they are identical.
        return ReprScores(0.0, 0.0, 0.0)
    return ReprScores(
        mse(reference, candidate, mask),
        pem20(reference, candidate, mask),
        dssim(reference, candidate, mask),
    )


def evaluate_representativeness(
    original: TimeSeries,
    selection,
    config: RenderConfig | None = None,
    kernel_size: int = DEFAULT_KERNEL,
    reference: RasterImage | None = None,
) -> ReprScores:
    """Score the chart of ``original[selection]`` against the chart of ``original``.

    Both are drawn on the original's axes. Pass a pre-rendered ``reference``
    to reuse it across selections; it must come from
    ``render(original, config.sharing_axes_with(original))``.
    """
    config = (config or RenderConfig()).sharing_axes_with(original)
    if reference is None:
        reference = render(original, config)
    candidate = render(materialize(original, selection), config)
    return compare_images(reference, candidate, kernel_size)
