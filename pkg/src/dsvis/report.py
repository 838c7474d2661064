"""Aggregate metric records into curve tables and box-plot statistics."""
from __future__ import annotations

import csv
from collections import defaultdict
from pathlib import Path

import numpy as np

from .data import MetricRecord

__all__ = ["curve_tables", "quartile_table", "summarize", "write_report"]

QUARTILE_HEADER = ("template", "algorithm", "metric", "count", "mean", "min", "q1", "median", "q3", "max")


def _is_stability(rec: MetricRecord) -> bool:
    return rec.kind != ""


def curve_tables(records) -> dict[str, tuple[list[str], list[list]]]:
    """Representativeness records as one wide table per metric.

    Rows are ascending ``n_out``; each column is one (template, algorithm,
    line width, antialias) curve. Missing cells are ``None``.
    """
    cells = defaultdict(dict)
    for rec in records:
        if _is_stability(rec):
            continue
        aa = "aa" if rec.antialias else "noaa"
        curve = f"{rec.template}/{rec.algorithm}/lw{rec.line_width:g}/{aa}"
        cells[rec.metric][(curve, rec.n_out)] = rec.value
    tables = {}
    for metric, values in sorted(cells.items()):
        curves = sorted({c for c, _ in values})
        n_outs = sorted({n for _, n in values})
        rows = [[n] + [values.get((c, n)) for c in curves] for n in n_outs]
        tables[metric] = (["n_out"] + curves, rows)
    return tables


def quartile_table(records) -> list[tuple]:
    """Per (template, algorithm, metric) statistics over every stability record."""
    groups = defaultdict(list)
    for rec in records:
        if _is_stability(rec):
            groups[(rec.template, rec.algorithm, rec.metric)].append(rec.value)
    rows = []
    for key in sorted(groups):
        v = np.asarray(groups[key])
        q1, med, q3 = np.percentile(v, [25, 50, 75])
        rows.append((*key, v.shape[0], v.mean(), v.min(), q1, med, q3, v.max()))
    return rows


def summarize(records) -> str:
    """Human-readable summary: mean per curve and the stability quartile table."""
    lines = []
    for metric, (header, rows) in curve_tables(records).items():
        lines.append(f"[{metric}] mean over n_out")
        for j, curve in enumerate(header[1:], start=1):
            vals = [r[j] for r in rows if r[j] is not None]
            lines.append(f"  {curve:<40} {np.mean(vals):12.6g}  ({len(vals)} points)")
    stats = quartile_table(records)
    if stats:
        lines.append("[stability] " + " ".join(QUARTILE_HEADER[1:]))
        for row in stats:
            t, a, m, count, *q = row
            lines.append(f"  {t}/{a:<10} {m:<5} {count:6d} " + " ".join(f"{v:10.4g}" for v in q))
    return "\n".join(lines)


def _fmt(v) -> str:
    return "" if v is None else (f"{v:.9g}" if isinstance(v, float) else str(v))


def write_report(records, out_dir) -> list[Path]:
    """Write ``curve_<metric>.csv`` files and ``stability_quartiles.csv``; return the paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for metric, (header, rows) in curve_tables(records).items():
        path = out_dir / f"curve_{metric}.csv"
        with path.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            w.writerows([_fmt(v) for v in row] for row in rows)
        written.append(path)
    stats = quartile_table(records)
    if stats:
        path = out_dir / "stability_quartiles.csv"
        with path.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(QUARTILE_HEADER)
            w.writerows([_fmt(float(v)) if isinstance(v, np.floating) else _fmt(v) for v in row] for row in stats)
        written.append(path)
    return written
