"""Build figures from evaluation metrics CSV files.

This package talks to the evaluation harness only through its on-disk
interface: the nine-column metrics CSV (family, m, n, total, parsed, correct,
accuracy, parsed_rate, parsed_weighted).  Each input file is labeled with a
run name; all inputs to one figure must describe the same task family, since
the family fixes the chance level drawn as a dashed reference line.

Three figure kinds:

- ``lines``       metric vs diagonal (m = n) difficulty, one series per run
- ``heatmap``     metric over the full (m, n) grid, one panel per run
- ``pw_compare``  raw accuracy vs parsed-weighted accuracy, paired per run

Every plotted point corresponds to exactly one CSV row; bins absent from a
CSV render as gaps, never interpolated.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")  # batch rendering; must be selected before pyplot loads

import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.figure import Figure  # noqa: E402
from matplotlib.ticker import ScalarFormatter  # noqa: E402

EXPECTED_COLUMNS = (
    "family",
    "m",
    "n",
    "total",
    "parsed",
    "correct",
    "accuracy",
    "parsed_rate",
    "parsed_weighted",
)

CHANCE_LEVELS = {"astro": 0.5, "collision": 0.25}

KINDS = ("lines", "heatmap", "pw_compare")
METRICS = ("accuracy", "parsed_weighted", "parsed_rate")

_METRIC_AXIS_LABELS = {
    "accuracy": "accuracy (raw)",
    "parsed_weighted": "parsed-weighted accuracy",
    "parsed_rate": "parsed rate",
}


class PlotError(Exception):
    """Base class for figure-generation failures."""


class SchemaMismatchError(PlotError):
    """An input CSV does not conform to the metrics schema, or the inputs
    disagree with each other (mixed families, duplicate labels)."""


class EmptyInputError(PlotError):
    """No inputs, no data rows, or no bins usable for the requested kind."""


@dataclass(frozen=True)
class BinRow:
    m: int
    n: int
    accuracy: float
    parsed_rate: float
    parsed_weighted: float

    def value(self, metric: str) -> float:
        return getattr(self, metric)


@dataclass(frozen=True)
class RunTable:
    """One labeled metrics CSV, parsed and validated."""

    label: str
    family: str
    rows: tuple[BinRow, ...]


@dataclass(frozen=True)
class PlotSpec:
    inputs: tuple[tuple[str, Path], ...]
    kind: str
    output_path: Path
    metric: str = "accuracy"

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if self.metric not in METRICS:
            raise ValueError(f"metric must be one of {METRICS}, got {self.metric!r}")
        if not self.inputs:
            raise EmptyInputError("at least one labeled CSV is required")
        labels = [label for label, _ in self.inputs]
        if len(set(labels)) != len(labels):
            raise SchemaMismatchError(f"duplicate run labels: {labels}")
        if any(not label for label in labels):
            raise SchemaMismatchError("run labels must be non-empty")


def load_table(label: str, path: Path) -> RunTable:
    """Read and validate one metrics CSV."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != EXPECTED_COLUMNS:
            raise SchemaMismatchError(
                f"{path}: expected columns {list(EXPECTED_COLUMNS)}, got {reader.fieldnames}"
            )
        rows: list[BinRow] = []
        family: str | None = None
        seen: set[tuple[int, int]] = set()
        for lineno, raw in enumerate(reader, start=2):
            try:
                m, n = int(raw["m"]), int(raw["n"])
                int(raw["total"]), int(raw["parsed"]), int(raw["correct"])
                ratios = {name: float(raw[name]) for name in METRICS}
            except (TypeError, ValueError) as exc:
                raise SchemaMismatchError(f"{path}:{lineno}: {exc}") from exc
            for name, value in ratios.items():
                if math.isnan(value) or not 0.0 <= value <= 1.0:
                    raise SchemaMismatchError(f"{path}:{lineno}: {name}={value} outside [0, 1]")
            if raw["family"] not in CHANCE_LEVELS:
                raise SchemaMismatchError(f"{path}:{lineno}: unknown family {raw['family']!r}")
            if family is None:
                family = raw["family"]
            elif raw["family"] != family:
                raise SchemaMismatchError(f"{path}:{lineno}: mixed families in one file")
            if (m, n) in seen:
                raise SchemaMismatchError(f"{path}:{lineno}: duplicate bin ({m}, {n})")
            seen.add((m, n))
            rows.append(BinRow(m=m, n=n, **ratios))
    if family is None:
        raise EmptyInputError(f"{path}: no data rows")
    return RunTable(label=label, family=family, rows=tuple(rows))


def load_inputs(spec: PlotSpec) -> tuple[RunTable, ...]:
    tables = tuple(load_table(label, path) for label, path in spec.inputs)
    families = {t.family for t in tables}
    if len(families) > 1:
        raise SchemaMismatchError(f"inputs span multiple families: {sorted(families)}")
    return tables


def _diagonal(table: RunTable) -> dict[int, BinRow]:
    return {row.m: row for row in table.rows if row.m == row.n}


def _diagonal_sizes(tables: tuple[RunTable, ...]) -> list[int]:
    sizes = sorted({m for table in tables for m in _diagonal(table)})
    if not sizes:
        raise EmptyInputError("no diagonal (m = n) bins in any input")
    return sizes


def _chance_line(ax, family: str) -> None:
    ax.axhline(CHANCE_LEVELS[family], linestyle="--", color="gray", linewidth=1, label="chance")


def _difficulty_axis(ax, sizes: list[int]) -> None:
    if len(sizes) > 1:
        ax.set_xscale("log", base=2)
    ax.set_xticks(sizes)
    ax.xaxis.set_major_formatter(ScalarFormatter())
    ax.set_xlabel("m = n")
    ax.set_ylim(0.0, 1.05)


def _lines_figure(tables: tuple[RunTable, ...], metric: str) -> Figure:
    sizes = _diagonal_sizes(tables)
    fig, ax = plt.subplots(figsize=(6, 4))
    for table in tables:
        diag = _diagonal(table)
        ys = [diag[s].value(metric) if s in diag else math.nan for s in sizes]
        ax.plot(sizes, ys, marker="o", label=table.label)
    _chance_line(ax, tables[0].family)
    _difficulty_axis(ax, sizes)
    ax.set_ylabel(_METRIC_AXIS_LABELS[metric])
    ax.legend()
    fig.tight_layout()
    return fig


def _heatmap_figure(tables: tuple[RunTable, ...], metric: str) -> Figure:
    fig, axes = plt.subplots(
        1, len(tables), figsize=(4.2 * len(tables), 4), squeeze=False, layout="constrained"
    )
    image = None
    for ax, table in zip(axes[0], tables):
        ms = sorted({row.m for row in table.rows})
        ns = sorted({row.n for row in table.rows})
        values = {(row.m, row.n): row.value(metric) for row in table.rows}
        grid = [[values.get((m, n), math.nan) for m in ms] for n in ns]
        image = ax.imshow(grid, origin="lower", vmin=0.0, vmax=1.0, cmap="viridis")
        ax.set_xticks(range(len(ms)), [str(m) for m in ms])
        ax.set_yticks(range(len(ns)), [str(n) for n in ns])
        ax.set_xlabel("m")
        ax.set_ylabel("n")
        ax.set_title(table.label)
    colorbar = fig.colorbar(image, ax=axes[0], label=_METRIC_AXIS_LABELS[metric])
    colorbar.ax.axhline(CHANCE_LEVELS[tables[0].family], linestyle="--", color="white", linewidth=1)
    return fig


def _pw_compare_figure(tables: tuple[RunTable, ...]) -> Figure:
    sizes = _diagonal_sizes(tables)
    fig, ax = plt.subplots(figsize=(6, 4))
    for table in tables:
        diag = _diagonal(table)
        raw = [diag[s].accuracy if s in diag else math.nan for s in sizes]
        weighted = [diag[s].parsed_weighted if s in diag else math.nan for s in sizes]
        (line,) = ax.plot(sizes, raw, marker="o", label=f"{table.label} raw")
        ax.plot(
            sizes, weighted, marker="s", linestyle="--", color=line.get_color(),
            label=f"{table.label} parsed-weighted",
        )
    _chance_line(ax, tables[0].family)
    _difficulty_axis(ax, sizes)
    ax.set_ylabel("accuracy")
    ax.legend()
    fig.tight_layout()
    return fig


def build_figure(spec: PlotSpec) -> Figure:
    """Load, validate, and render; the caller owns (and must close) the figure."""
    tables = load_inputs(spec)
    if spec.kind == "lines":
        return _lines_figure(tables, spec.metric)
    if spec.kind == "heatmap":
        return _heatmap_figure(tables, spec.metric)
    return _pw_compare_figure(tables)


def plot(spec: PlotSpec) -> Path:
    """Render the figure to ``spec.output_path`` (format chosen by suffix)."""
    fig = build_figure(spec)
    try:
        # Date metadata would make otherwise-identical SVG output differ
        # between runs; PNG carries none to begin with.
        metadata = {"Date": None} if spec.output_path.suffix == ".svg" else None
        fig.savefig(spec.output_path, metadata=metadata)
    finally:
        plt.close(fig)
    return spec.output_path
