"""Exoplanet catalog ingestion for Astro Recall generation.

The catalog is a UTF-8 CSV with a header row.  One column holds the numeric
attribute whose values are bound to variables (the target column) and one
holds the unique identity used as the answer text (the retrieve column).
A default catalog ships with the package.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Mapping


class CatalogError(Exception):
    """Base class for catalog ingestion failures."""


class MissingColumnError(CatalogError):
    pass


class DuplicateIdentityError(CatalogError):
    pass


class NonNumericTargetError(CatalogError):
    pass


class EmptyCatalogError(CatalogError):
    pass


DEFAULT_TARGET_COLUMN = "Orbital Period (days)"
DEFAULT_RETRIEVE_COLUMN = "Planet"


@dataclass(frozen=True)
class CatalogRow:
    """One catalog row; ``cells`` maps every declared column to its text."""

    cells: Mapping[str, str]


@dataclass(frozen=True)
class Catalog:
    columns: tuple[str, ...]
    rows: tuple[CatalogRow, ...]
    target_column: str
    retrieve_column: str

    def __len__(self) -> int:
        return len(self.rows)


def default_catalog_path() -> Path:
    """Path of the bundled exoplanet catalog."""
    return Path(str(resources.files("staterecall").joinpath("data/exoplanets.csv")))


def _is_finite_number(text: str) -> bool:
    try:
        value = float(text)
    except ValueError:
        return False
    return math.isfinite(value)


def load_catalog(
    path: str | Path,
    target_column: str = DEFAULT_TARGET_COLUMN,
    retrieve_column: str = DEFAULT_RETRIEVE_COLUMN,
) -> Catalog:
    """Load and validate a catalog CSV, preserving file row order.

    Raises :class:`MissingColumnError` if a declared column is absent,
    :class:`DuplicateIdentityError` on repeated retrieve values,
    :class:`NonNumericTargetError` if a target cell is not a finite number,
    and :class:`EmptyCatalogError` for a header-only file.
    """
    path = Path(path)
    with path.open("r", encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise EmptyCatalogError(f"{path}: no header row") from None
        columns = tuple(name.strip() for name in header)
        for required in (target_column, retrieve_column):
            if required not in columns:
                raise MissingColumnError(f"{path}: column {required!r} not in header")
        rows: list[CatalogRow] = []
        seen: set[str] = set()
        for lineno, raw in enumerate(reader, start=2):
            if not raw or all(cell.strip() == "" for cell in raw):
                continue
            if len(raw) != len(columns):
                raise CatalogError(f"{path}:{lineno}: expected {len(columns)} cells, got {len(raw)}")
            cells = {col: raw[i].strip() for i, col in enumerate(columns)}
            identity = cells[retrieve_column]
            if identity in seen:
                raise DuplicateIdentityError(f"{path}:{lineno}: duplicate {retrieve_column!r} value {identity!r}")
            seen.add(identity)
            target = cells[target_column]
            if not _is_finite_number(target):
                raise NonNumericTargetError(f"{path}:{lineno}: {target_column!r} value {target!r} is not a finite number")
            rows.append(CatalogRow(cells=cells))
    if not rows:
        raise EmptyCatalogError(f"{path}: no data rows")
    return Catalog(
        columns=columns,
        rows=tuple(rows),
        target_column=target_column,
        retrieve_column=retrieve_column,
    )
