"""Figure generation for evaluation metrics CSVs."""

from staterecall_plots.figures import (
    CHANCE_LEVELS,
    EXPECTED_COLUMNS,
    KINDS,
    METRICS,
    BinRow,
    EmptyInputError,
    PlotError,
    PlotSpec,
    RunTable,
    SchemaMismatchError,
    build_figure,
    load_table,
    plot,
)

__all__ = [
    "CHANCE_LEVELS",
    "EXPECTED_COLUMNS",
    "KINDS",
    "METRICS",
    "BinRow",
    "EmptyInputError",
    "PlotError",
    "PlotSpec",
    "RunTable",
    "SchemaMismatchError",
    "build_figure",
    "load_table",
    "plot",
]
