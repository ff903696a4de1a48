"""Render experiment CSVs into figures.

This layer only reads the documented CSV schemas and draws; it computes no
metrics beyond per-series medians for display. Supported kinds:

  nmse_sweep  rows (strategy, m, value|nmse), one log-scale series per strategy
  region      rows (zeta, eta, corner), four corner curves plus shading
  accuracy    rows (strategy|basis, m, value|accuracy), linear scale
  silhouette  rows (strategy|basis, m, value|silhouette), linear scale
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from statistics import median

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

KINDS = ("nmse_sweep", "region", "accuracy", "silhouette")


class SchemaError(ValueError):
    """The CSV lacks a required column or has no usable rows."""


@dataclass(frozen=True)
class PlotSpec:
    kind: str
    input_path: str
    output_path: str
    title: str | None = None
    axis_options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise SchemaError(f"kind must be one of {KINDS}, got {self.kind!r}")


def _read_rows(path: str) -> list[dict]:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise SchemaError("missing column: empty file, no header")
        rows = [row for row in reader if any(v.strip() for v in row.values() if v)]
    if not rows:
        raise SchemaError("no data rows")
    return rows


def _require(rows: list[dict], *columns: str) -> None:
    present = rows[0].keys()
    for col in columns:
        if col not in present:
            raise SchemaError(f"missing column: {col}")


def _metric_series(rows: list[dict], metric: str) -> dict[str, dict[int, list[float]]]:
    """Group metric values by series label and sample count m.

    Accepts both the uniform schema (metric/value columns) and the compact
    one (a column named after the metric).
    """
    columns = rows[0].keys()
    label_col = "strategy" if "strategy" in columns else "basis"
    _require(rows, label_col, "m")
    if metric in columns:
        picked = [(r[label_col], int(r["m"]), float(r[metric])) for r in rows]
    else:
        _require(rows, "metric", "value")
        picked = [
            (r[label_col], int(r["m"]), float(r["value"]))
            for r in rows
            if r["metric"] == metric
        ]
    if not picked:
        raise SchemaError(f"no data rows with metric {metric!r}")
    series: dict[str, dict[int, list[float]]] = {}
    for label, m, value in picked:
        series.setdefault(label, {}).setdefault(m, []).append(value)
    return series


def _plot_metric(spec: PlotSpec, metric: str, log_y: bool, ylabel: str) -> None:
    series = _metric_series(_read_rows(spec.input_path), metric)
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for label in sorted(series):
        points = sorted((m, median(vals)) for m, vals in series[label].items())
        ax.plot([p[0] for p in points], [p[1] for p in points], marker="o", label=label)
    if log_y:
        ax.set_yscale("log")
    ax.set_xlabel("number of samples")
    ax.set_ylabel(ylabel)
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=8)
    if spec.title:
        ax.set_title(spec.title)
    fig.tight_layout()
    fig.savefig(spec.output_path)
    plt.close(fig)


def _plot_region(spec: PlotSpec) -> None:
    rows = _read_rows(spec.input_path)
    _require(rows, "zeta", "eta", "corner")
    curves: dict[str, list[tuple[float, float]]] = {}
    for row in rows:
        curves.setdefault(row["corner"], []).append((float(row["zeta"]), float(row["eta"])))
    for corner in curves:
        curves[corner].sort()

    fig, ax = plt.subplots(figsize=(5.2, 5.2))
    # Walk the region boundary: corner curves joined by unit-square edges.
    boundary: list[tuple[float, float]] = []
    if "UL" in curves:
        boundary.extend(curves["UL"])
    if "UR" in curves:
        boundary.extend(curves["UR"])
    if "LR" in curves:
        boundary.extend(reversed(curves["LR"]))
    if "LL" in curves:
        boundary.extend(reversed(curves["LL"]))
    if boundary:
        ax.fill([p[0] for p in boundary], [p[1] for p in boundary],
                color="tab:blue", alpha=0.25, label="admissible region")
    for corner, pts in sorted(curves.items()):
        ax.plot([p[0] for p in pts], [p[1] for p in pts], lw=1.5, label=f"{corner} boundary")
    ax.set_xlim(-0.02, 1.02)
    ax.set_ylim(-0.02, 1.02)
    ax.set_xlabel("vertex-domain concentration")
    ax.set_ylabel("spectral-domain concentration")
    ax.set_aspect("equal")
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=8, loc="lower left")
    if spec.title:
        ax.set_title(spec.title)
    fig.tight_layout()
    fig.savefig(spec.output_path)
    plt.close(fig)


def render(spec: PlotSpec) -> None:
    """Render the spec's CSV to its output image path."""
    if spec.kind == "nmse_sweep":
        _plot_metric(spec, "nmse", log_y=True, ylabel="NMSE")
    elif spec.kind == "region":
        _plot_region(spec)
    elif spec.kind == "accuracy":
        _plot_metric(spec, "accuracy", log_y=False, ylabel="accuracy")
    else:
        _plot_metric(spec, "silhouette", log_y=False, ylabel="silhouette score")
