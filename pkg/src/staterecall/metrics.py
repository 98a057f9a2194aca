"""Aggregate scored run records into per-(m, n) bin metrics.

Two scores per bin: raw accuracy (correct over *parsed*, the quality of the
answers a model actually produced) and parsed-weighted accuracy (accuracy
scaled by the fraction of responses that parsed at all).  A solver that
answers correctly but rarely in valid form scores high on the first and low
on the second; the pair together is the point.

All arithmetic is exact (``fractions.Fraction``); decimals appear only at the
CSV/display boundary.  The identity parsed_weighted * total == correct holds
exactly for every bin.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Protocol

from staterecall.taskgen.seeds import Family

CSV_COLUMNS = (
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

CHANCE_LEVELS: dict[Family, Fraction] = {
    Family.ASTRO: Fraction(1, 2),
    Family.COLLISION: Fraction(1, 4),
}


class MetricsError(Exception):
    pass


class NoRecordsError(MetricsError):
    pass


class MixedFamiliesError(MetricsError):
    pass


class DuplicateInstanceError(MetricsError):
    pass


class ZeroTotalError(MetricsError):
    pass


class ScoredRecord(Protocol):
    """What aggregation needs from a record; satisfied by runner.RunRecord."""

    family: Family
    m: int
    n: int
    index: int

    @property
    def parsed(self) -> bool: ...

    @property
    def is_correct(self) -> bool: ...


@dataclass(frozen=True)
class BinMetrics:
    m: int
    n: int
    total: int
    parsed: int
    correct: int
    accuracy: Fraction
    parsed_rate: Fraction
    parsed_weighted: Fraction

    def __post_init__(self) -> None:
        if not 0 <= self.correct <= self.parsed <= self.total:
            raise ValueError("expected 0 <= correct <= parsed <= total")
        for name in ("accuracy", "parsed_rate", "parsed_weighted"):
            value = getattr(self, name)
            if not 0 <= value <= 1:
                raise ValueError(f"{name} outside [0, 1]: {value}")


@dataclass(frozen=True)
class GridReport:
    family: Family
    bins: tuple[BinMetrics, ...]
    chance_level: Fraction

    def bin(self, m: int, n: int) -> BinMetrics:
        for item in self.bins:
            if (item.m, item.n) == (m, n):
                return item
        raise KeyError((m, n))


def parsed_weighted(accuracy: Fraction, parsed: int, total: int) -> Fraction:
    """accuracy × parsed/total.  With accuracy = correct/parsed this equals
    correct/total exactly, whatever the bin size."""
    if total <= 0:
        raise ZeroTotalError("total must be positive")
    if not 0 <= parsed <= total:
        raise ValueError("expected 0 <= parsed <= total")
    return accuracy * Fraction(parsed, total)


def _bin_metrics(m: int, n: int, total: int, parsed: int, correct: int) -> BinMetrics:
    accuracy = Fraction(correct, parsed) if parsed else Fraction(0)
    return BinMetrics(
        m=m,
        n=n,
        total=total,
        parsed=parsed,
        correct=correct,
        accuracy=accuracy,
        parsed_rate=Fraction(parsed, total),
        parsed_weighted=parsed_weighted(accuracy, parsed, total),
    )


def aggregate(records: Iterable[ScoredRecord]) -> GridReport:
    """Group records by (m, n) and compute exact bin metrics."""
    family: Family | None = None
    seen: set[tuple[int, int, int]] = set()
    counts: dict[tuple[int, int], list[int]] = {}
    for record in records:
        if family is None:
            family = record.family
        elif record.family is not family:
            raise MixedFamiliesError(
                f"records mix families {family.value!r} and {record.family.value!r}"
            )
        key = (record.m, record.n, record.index)
        if key in seen:
            raise DuplicateInstanceError(f"duplicate record for (m={key[0]}, n={key[1]}, index={key[2]})")
        seen.add(key)
        tally = counts.setdefault((record.m, record.n), [0, 0, 0])
        tally[0] += 1
        if record.parsed:
            tally[1] += 1
            if record.is_correct:
                tally[2] += 1
    if family is None:
        raise NoRecordsError("no records to aggregate")
    bins = tuple(
        _bin_metrics(m, n, total, parsed, correct)
        for (m, n), (total, parsed, correct) in sorted(counts.items())
    )
    return GridReport(family=family, bins=bins, chance_level=CHANCE_LEVELS[family])


def _render_ratio(value: Fraction) -> str:
    return f"{float(value):.6f}"


def write_metrics_csv(report: GridReport, path: Path | str) -> None:
    """Write the report as CSV (one row per bin, sorted by (m, n))."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for item in report.bins:
            writer.writerow(
                [
                    report.family.value,
                    item.m,
                    item.n,
                    item.total,
                    item.parsed,
                    item.correct,
                    _render_ratio(item.accuracy),
                    _render_ratio(item.parsed_rate),
                    _render_ratio(item.parsed_weighted),
                ]
            )


def read_metrics_csv(path: Path | str) -> list[dict[str, object]]:
    """Read a metrics CSV back into typed row dicts (ints and floats)."""
    rows: list[dict[str, object]] = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or tuple(reader.fieldnames) != CSV_COLUMNS:
            raise MetricsError(f"{path}: unexpected columns {reader.fieldnames}")
        for raw in reader:
            row: dict[str, object] = {"family": raw["family"]}
            for col in ("m", "n", "total", "parsed", "correct"):
                row[col] = int(raw[col])
            for col in ("accuracy", "parsed_rate", "parsed_weighted"):
                row[col] = float(raw[col])
            rows.append(row)
    return rows


def format_report(report: GridReport) -> str:
    """Fixed-width text table of a report, for CLI display."""
    header = ["m", "n", "total", "parsed", "correct", "accuracy", "parsed_rate", "parsed_weighted"]
    rows = [
        [
            str(item.m),
            str(item.n),
            str(item.total),
            str(item.parsed),
            str(item.correct),
            _render_ratio(item.accuracy),
            _render_ratio(item.parsed_rate),
            _render_ratio(item.parsed_weighted),
        ]
        for item in report.bins
    ]
    widths = [max(len(header[i]), *(len(r[i]) for r in rows)) if rows else len(header[i]) for i in range(len(header))]
    lines = [
        f"family: {report.family.value} (chance level {_render_ratio(report.chance_level)})",
        "  ".join(h.rjust(widths[i]) for i, h in enumerate(header)),
    ]
    for r in rows:
        lines.append("  ".join(cell.rjust(widths[i]) for i, cell in enumerate(r)))
    return "\n".join(lines)
