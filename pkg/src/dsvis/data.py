"""Template generation, series files and metric record files.

Noise templates are reproducible from their seed alone: 64-bit words come from
PCG64 (seeded through numpy's ``SeedSequence(seed)``), each word becomes a
double ``u = (w >> 11) * 2**-53`` in [0, 1), and consecutive pairs
``(u1, u2)`` go through Box-Muller::

    z0 = sqrt(-2 ln(1 - u1)) * cos(2 pi u2)
    z1 = sqrt(-2 ln(1 - u1)) * sin(2 pi u2)

giving ``y = [z0, z1, z0', z1', ...]`` truncated to ``N`` at ``x = 0..N-1``.
"""
from __future__ import annotations

import csv
import math
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ParseError, TooLongError, ValidationError
from .series import TimeSeries, validate

__all__ = [
    "CANONICAL_SIZES",
    "MetricRecord",
    "RECORD_HEADER",
    "TemplateSpec",
    "generate_noise",
    "load_series",
    "read_records",
    "save_series",
    "take_prefix",
    "write_records",
]

CANONICAL_SIZES = {"50k": 50_000, "200k": 200_000, "1m": 1_000_000}
RAW_SUFFIXES = (".f64", ".raw", ".bin")


def generate_noise(seed: int, n: int) -> TimeSeries:
    """Standard normal white noise of length ``n``, deterministic per ``seed``."""
    if n < 2:
        raise ValidationError(f"noise template needs n >= 2, got {n}")
    bitgen = np.random.PCG64(seed)
    words = bitgen.random_raw(2 * ((n + 1) // 2)).astype(np.uint64)
    u = (words >> np.uint64(11)).astype(np.float64) * 2.0**-53
    u1, u2 = u[0::2], u[1::2]
    radius = np.sqrt(-2.0 * np.log1p(-u1))
    angle = 2.0 * np.pi * u2
    y = np.empty(u.shape[0])
    y[0::2] = radius * np.cos(angle)
    y[1::2] = radius * np.sin(angle)
    return TimeSeries(np.arange(n, dtype=np.float64), y[:n])


def take_prefix(series: TimeSeries, n: int) -> TimeSeries:
    """The first ``n`` samples."""
    if n > len(series):
        raise TooLongError(f"prefix of {n} samples requested from a series of {len(series)}")
    if n < 2:
        raise ValidationError(f"prefix needs n >= 2, got {n}")
    if n == len(series):
        return series
    return TimeSeries._trusted(series.x[:n], series.y[:n])


def _infer_format(path: Path, fmt: str | None) -> str:
    if fmt:
        if fmt not in ("csv", "raw-f64"):
            raise ValueError(f"format must be 'csv' or 'raw-f64', got {fmt!r}")
        return fmt
    return "raw-f64" if path.suffix.lower() in RAW_SUFFIXES else "csv"


def load_series(path, fmt: str | None = None, x_column: str | None = None,
                y_column: str | None = None) -> TimeSeries:
    """Read a series from a CSV file (header required) or raw little-endian float64.

    For CSV, ``y_column`` defaults to ``"y"`` when present and otherwise to the
    last column; ``x_column`` defaults to ``"x"`` when present. Without an x
    column the positions are ``0..N-1``, as they always are for raw files.
    """
    path = Path(path)
    fmt = _infer_format(path, fmt)
    if fmt == "raw-f64":
        data = path.read_bytes()
        if len(data) % 8:
            raise ParseError(f"{path}: raw-f64 size {len(data)} is not a multiple of 8")
        return validate(np.frombuffer(data, dtype="<f8").astype(np.float64))

    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise ParseError(f"{path}: empty CSV file") from None
        rows = [row for row in reader if row]
    if y_column is None:
        y_column = "y" if "y" in header else header[-1]
    if x_column is None and "x" in header and y_column != "x":
        x_column = "x"
    for col in (x_column, y_column):
        if col is not None and col not in header:
            raise ParseError(f"{path}: no column {col!r} in header {header}")
    try:
        yi = header.index(y_column)
        y = [float(r[yi]) for r in rows]
        if x_column is None:
            return validate(y)
        xi = header.index(x_column)
        x = [float(r[xi]) for r in rows]
    except (ValueError, IndexError) as exc:
        raise ParseError(f"{path}: {exc}") from None
    return validate(x, y)


def save_series(series: TimeSeries, path, fmt: str | None = None) -> None:
    """Write ``series``; CSV keeps x and y exactly, raw-f64 keeps only y."""
    path = Path(path)
    fmt = _infer_format(path, fmt)
    if fmt == "raw-f64":
        path.write_bytes(np.asarray(series.y, dtype="<f8").tobytes())
        return
    with path.open("w", newline="") as fh:
        fh.write("x,y\n")
        for xv, yv in zip(series.x.tolist(), series.y.tolist()):
            fh.write(f"{xv!r},{yv!r}\n")


@dataclass(frozen=True)
class TemplateSpec:
    """A named template: seeded noise of ``size`` samples or a file prefix."""

    name: str
    size: int | None = None
    seed: int = 0
    path: str | None = None
    fmt: str | None = None
    x_column: str | None = None
    y_column: str | None = None

    @classmethod
    def parse(cls, text: str, seed: int = 0) -> TemplateSpec:
        """``noise-50k`` / ``noise-200k`` / ``noise-1m`` / ``noise:<N>`` or a file path.

        A file path may carry ``@<N>`` to keep only the first N samples.
        """
        m = re.fullmatch(r"noise[-:](\d+|50k|200k|1m)", text.lower())
        if m:
            tag = m.group(1)
            n = CANONICAL_SIZES.get(tag) or int(tag)
            label = f"noise-{tag}" if tag in CANONICAL_SIZES else f"noise-{n}"
            return cls(label, n, seed)
        path, _, size = text.partition("@")
        return cls(Path(path).stem, int(size) if size else None, seed, path)

    def build(self, extra: int = 0) -> TimeSeries:
        """Load or generate the series; ``extra`` noise samples are appended for margins."""
        if self.path is None:
            return generate_noise(self.seed, self.size + extra)
        series = load_series(self.path, self.fmt, self.x_column, self.y_column)
        return take_prefix(series, self.size) if self.size else series


RECORD_HEADER = ("template", "algorithm", "n_out", "line_width", "antialias",
                 "metric", "value", "offset", "kind")


@dataclass(frozen=True)
class MetricRecord:
    """One result row. Stability rows leave ``line_width``/``antialias`` empty."""

    template: str
    algorithm: str
    n_out: int
    line_width: float | None
    antialias: bool | None
    metric: str
    value: float
    offset: str = ""
    kind: str = ""

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise ValidationError(f"record value must be finite, got {self.value!r}")

    def sort_key(self):
        lw = -1.0 if self.line_width is None else float(self.line_width)
        return (self.template, self.algorithm, self.n_out, lw, self.offset, self.kind, self.metric)

    def to_row(self) -> list[str]:
        return [
            self.template,
            self.algorithm,
            str(self.n_out),
            "" if self.line_width is None else f"{self.line_width:g}",
            "" if self.antialias is None else ("true" if self.antialias else "false"),
            self.metric,
            f"{self.value:.9g}",
            self.offset,
            self.kind,
        ]

    @classmethod
    def from_row(cls, row: dict[str, str]) -> MetricRecord:
        try:
            aa = row["antialias"]
            return cls(
                template=row["template"],
                algorithm=row["algorithm"],
                n_out=int(row["n_out"]),
                line_width=float(row["line_width"]) if row["line_width"] else None,
                antialias=None if aa == "" else aa == "true",
                metric=row["metric"],
                value=float(row["value"]),
                offset=row["offset"],
                kind=row["kind"],
            )
        except (KeyError, ValueError) as exc:
            raise ParseError(f"bad record row {row}: {exc}") from None


def write_records(records, path) -> None:
    """CSV with the fixed header, in the given order; values carry 9 significant digits."""
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(RECORD_HEADER)
        for rec in records:
            writer.writerow(rec.to_row())


def read_records(path) -> list[MetricRecord]:
    with Path(path).open(newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != RECORD_HEADER:
            raise ParseError(f"{path}: header {reader.fieldnames} != {list(RECORD_HEADER)}")
        return [MetricRecord.from_row(row) for row in reader]

