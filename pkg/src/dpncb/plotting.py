"""Regret-curve rendering from experiment CSVs.

One polyline per (algorithm, epsilon) series, x = T, y = nash_regret,
written as standalone SVG.  Output is deterministic for a fixed input
(hash salt pinned, no timestamps embedded).
"""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .exceptions import ConfigError
from .harness import CSV_HEADER

__all__ = ["PlotSpec", "emit_plot"]

LOG_AXIS_FLOOR = 1e-6


@dataclass(frozen=True)
class PlotSpec:
    y_column: str = "nash_regret"
    loglog: bool = False
    title: str = ""


def _read_rows(csv_path: str) -> list:
    with open(csv_path, "r", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or ",".join(reader.fieldnames) != CSV_HEADER:
            raise ConfigError(f"unexpected CSV header in {csv_path}")
        rows = list(reader)
    if not rows:
        raise ConfigError(f"CSV {csv_path} has no data rows")
    return rows


def emit_plot(csv_path: str, out_path: str, spec: PlotSpec = PlotSpec()) -> str:
    """Render the CSV to ``out_path`` (SVG); returns the output path."""
    rows = _read_rows(csv_path)
    if spec.y_column not in rows[0]:
        raise ConfigError(f"no column {spec.y_column!r} in {csv_path}")

    series = {}
    for row in rows:
        key = (row["algorithm"], row["epsilon"])
        series.setdefault(key, []).append((int(row["T"]), float(row[spec.y_column])))

    plt.rcParams["svg.hashsalt"] = "dpncb"
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for (alg, eps), pts in series.items():
        pts.sort()
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]
        if spec.loglog:
            clamped = [max(y, LOG_AXIS_FLOOR) for y in ys]
            if clamped != ys:
                warnings.warn(
                    f"series ({alg}, eps={eps}) has values <= 0; clamped to {LOG_AXIS_FLOOR} "
                    "for log axes"
                )
            ys = clamped
        label = alg if len({k[1] for k in series}) == 1 else f"{alg} (eps={eps})"
        ax.plot(xs, ys, marker="o", markersize=3, label=label)
    if spec.loglog:
        ax.set_xscale("log")
        ax.set_yscale("log")
    ax.set_xlabel("T")
    ax.set_ylabel(spec.y_column)
    if spec.title:
        ax.set_title(spec.title)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(out_path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return out_path
