"""Experiment grids: representativeness and stability sweeps, elbow detection."""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .algorithms import ALGORITHMS, DISPLAY_NAMES, DownsampleSpec, check_n_out, downsample, materialize, parse_algorithm
from .data import MetricRecord, TemplateSpec
from .errors import DsvisError, UnsupportedAlgorithmError
from .metrics import DEFAULT_KERNEL, compare_images
from .raster import RenderConfig, render
from .series import TimeSeries
from .stability import ViewUpdate, apply_update, downsampled_view, sample_view, stability_scores

__all__ = [
    "GUARANTEED_ALTERNATION",
    "Skip",
    "detect_elbow",
    "parse_grid",
    "predict_elbow",
    "repr_sweep",
    "stability_setup",
    "stability_sweep",
]

GUARANTEED_ALTERNATION = {"lttb": 2, "minmax": 3, "m4": 6}
REPR_METRICS = ("mse", "pem20", "dssim")
STABILITY_METRICS = ("mae", "maep")


@dataclass(frozen=True)
class Skip:
    """A grid cell that produced no record, with the reason."""

    template: str
    algorithm: str
    n_out: int
    line_width: float | None
    offset: str
    kind: str
    reason: str

    def sort_key(self):
        lw = -1.0 if self.line_width is None else self.line_width
        return (self.template, self.algorithm, self.n_out, lw, self.offset, self.kind)


def parse_grid(text: str) -> list[int]:
    """``"200:2000:200"`` (inclusive range) or ``"200,400,1000"``."""
    text = text.strip()
    if ":" in text:
        parts = [int(p) for p in text.split(":")]
        if len(parts) == 2:
            parts.append(1)
        start, stop, step = parts
        if step <= 0 or stop < start:
            raise ValueError(f"bad range {text!r}")
        return list(range(start, stop + 1, step))
    return [int(p) for p in text.split(",") if p.strip()]


def predict_elbow(canvas_width: int, line_width: float, algorithm: str) -> int:
    """``canvas_width * n_ga / line_width`` rounded half up, where n_ga is the number
    of selected points per bucket needed for guaranteed min/max alternation."""
    key = parse_algorithm(algorithm)
    if key not in GUARANTEED_ALTERNATION:
        raise UnsupportedAlgorithmError(f"no alternation guarantee for {algorithm!r}")
    return int(math.floor(canvas_width * GUARANTEED_ALTERNATION[key] / line_width + 0.5))


def detect_elbow(n_outs, values, rel_tol: float = 0.05) -> int:
    """First ``n_out`` whose value is within ``rel_tol`` of the terminal (last) value."""
    n_outs = list(n_outs)
    values = np.asarray(values, dtype=np.float64)
    plateau = values[-1]
    hits = np.flatnonzero(values <= plateau * (1 + rel_tol))
    return n_outs[int(hits[0])]


def _spec(algorithm: str, n_out: int, binning: str, n: int) -> DownsampleSpec:
    check_n_out(algorithm, n_out, n)
    return DownsampleSpec(algorithm, n_out, binning)


def _repr_task(args):
    name, series, algorithms, n_outs, lw, aa, canvas, kernel_size, binning = args
    config = RenderConfig(canvas[0], canvas[1], lw, aa).sharing_axes_with(series)
    reference = render(series, config)
    records, skips = [], []
    for algo in algorithms:
        for n_out in n_outs:
            try:
                spec = _spec(algo, n_out, binning, len(series))
                sel = downsample(series, spec)
                scores = compare_images(reference, render(materialize(series, sel), config), kernel_size)
            except DsvisError as exc:
                skips.append(Skip(name, algo, n_out, lw, "", "", f"{type(exc).__name__}: {exc}"))
                continue
            for metric, value in scores.as_dict().items():
                records.append(MetricRecord(name, algo, n_out, lw, aa, metric, value))
    return records, skips


def _run(tasks, fn, jobs: int):
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(fn, tasks))
    else:
        results = [fn(t) for t in tasks]
    records, skips = [], []
    for r, s in results:
        records += r
        skips += s
    return sorted(records, key=MetricRecord.sort_key), sorted(skips, key=Skip.sort_key)


def repr_sweep(templates: dict[str, TimeSeries], algorithms=ALGORITHMS, n_outs=range(200, 2001, 200),
               line_widths=(2,), antialias=(True,), canvas=(800, 250),
               kernel_size: int = DEFAULT_KERNEL, binning: str = "index", jobs: int = 1):
    """Representativeness records for every (template, algorithm, n_out, width, aa) cell.

    Returns ``(records, skips)``, both in canonical order.
    """
    tasks = [
        (name, series, tuple(algorithms), tuple(n_outs), lw, aa, tuple(canvas), kernel_size, binning)
        for name, series in templates.items()
        for aa in antialias
        for lw in line_widths
    ]
    return _run(tasks, _repr_task, jobs)


def stability_setup(template: TemplateSpec, max_offset) -> tuple[TimeSeries, tuple[float, float]]:
    """Source series and initial view for stability runs.

    Noise templates get ``ceil(max_offset * N) + 1`` extra samples on each side
    so every update in the suite stays inside the data; the view holds the
    ``N`` central samples. File templates use their largest central view that
    leaves the same relative margin.
    """
    max_offset = float(max_offset)
    if template.path is None:
        n = template.size
        margin = math.ceil(max_offset * n) + 1
        source = template.build(extra=2 * margin)
        return source, sample_view(source, margin, n)
    source = template.build()
    n = int(len(source) / (1 + 2 * max_offset)) - 2
    start = (len(source) - n) // 2
    return source, sample_view(source, start, n)


def _stability_task(args):
    name, series, view, algo, n_outs, updates, binning = args
    n_view = int(np.count_nonzero((series.x >= view[0]) & (series.x <= view[1])))
    records, skips = [], []
    for n_out in n_outs:
        try:
            spec = _spec(algo, n_out, binning, n_view)
            ds0 = downsampled_view(series, view, spec)
        except DsvisError as exc:
            for u in updates:
                skips.append(Skip(name, algo, n_out, None, u.label, u.kind, f"{type(exc).__name__}: {exc}"))
            continue
        for u in updates:
            try:
                new_view = apply_update(series, view, u, clamp=True)
                scores = stability_scores(ds0, downsampled_view(series, new_view, spec))
            except DsvisError as exc:
                skips.append(Skip(name, algo, n_out, None, u.label, u.kind, f"{type(exc).__name__}: {exc}"))
                continue
            records.append(MetricRecord(name, algo, n_out, None, None, "mae", scores.mae, u.label, u.kind))
            if scores.maep is None:
                skips.append(Skip(name, algo, n_out, None, u.label, u.kind, "NoPeaksError: maep undefined"))
            else:
                records.append(MetricRecord(name, algo, n_out, None, None, "maep", scores.maep, u.label, u.kind))
    return records, skips


def stability_sweep(templates: dict[str, tuple[TimeSeries, tuple[float, float]]], algorithms=ALGORITHMS,
                    n_outs=range(200, 2001, 200), updates: list[ViewUpdate] | None = None,
                    binning: str = "index", jobs: int = 1):
    """Stability records for every (template, algorithm, n_out, update) cell.

    ``templates`` maps a name to ``(series, initial_view)`` (see
    :func:`stability_setup`). Returns ``(records, skips)`` in canonical order.
    """
    from .stability import update_suite

    updates = update_suite() if updates is None else updates
    tasks = [
        (name, series, view, algo, tuple(n_outs), tuple(updates), binning)
        for name, (series, view) in templates.items()
        for algo in algorithms
    ]
    return _run(tasks, _stability_task, jobs)


def max_abs_offset(updates) -> Fraction | float:
    return max(max(abs(u.delta_left), abs(u.delta_right)) for u in updates)


def display_name(algorithm: str) -> str:
    return DISPLAY_NAMES.get(algorithm, algorithm)
