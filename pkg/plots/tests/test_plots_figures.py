from __future__ import annotations

import math

import matplotlib.pyplot as plt
import pytest

from staterecall_plots.figures import (
    CHANCE_LEVELS,
    EmptyInputError,
    PlotSpec,
    SchemaMismatchError,
    build_figure,
    load_table,
    plot,
)

from csvfixtures import write_csv


def make_spec(tmp_path, *inputs, kind="lines", metric="accuracy", name="fig.png"):
    return PlotSpec(inputs=tuple(inputs), kind=kind, output_path=tmp_path / name, metric=metric)


def chance_lines(ax, level):
    out = []
    for line in ax.get_lines():
        ys = list(line.get_ydata())
        if len(ys) == 2 and ys[0] == ys[1] == level:
            out.append(line)
    return out


class TestLoadTable:
    def test_reads_real_metrics(self, oracle_csv):
        table = load_table("oracle", oracle_csv)
        assert table.family == "collision"
        assert [(r.m, r.n) for r in table.rows] == [(4, 4), (8, 8), (16, 16)]
        assert all(r.accuracy == 1.0 for r in table.rows)

    def test_rejects_wrong_columns(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("family,m,n,accuracy\ncollision,4,4,1.0\n", encoding="utf-8")
        with pytest.raises(SchemaMismatchError, match="expected columns"):
            load_table("x", bad)

    def test_rejects_mixed_families_within_file(self, tmp_path):
        path = write_csv(tmp_path / "mixed.csv", [
            "collision,4,4,10,10,10,1.000000,1.000000,1.000000",
            "astro,8,8,10,10,10,1.000000,1.000000,1.000000",
        ])
        with pytest.raises(SchemaMismatchError, match="mixed families"):
            load_table("x", path)

    def test_rejects_unknown_family(self, tmp_path):
        path = write_csv(tmp_path / "who.csv", ["chess,4,4,10,10,10,1.0,1.0,1.0"])
        with pytest.raises(SchemaMismatchError, match="unknown family"):
            load_table("x", path)

    def test_rejects_duplicate_bin(self, tmp_path):
        path = write_csv(tmp_path / "dup.csv", [
            "collision,4,4,10,10,10,1.0,1.0,1.0",
            "collision,4,4,10,10,10,1.0,1.0,1.0",
        ])
        with pytest.raises(SchemaMismatchError, match="duplicate bin"):
            load_table("x", path)

    def test_rejects_ratio_out_of_range(self, tmp_path):
        path = write_csv(tmp_path / "oob.csv", ["collision,4,4,10,10,10,1.5,1.0,1.0"])
        with pytest.raises(SchemaMismatchError, match="outside"):
            load_table("x", path)

    def test_rejects_non_numeric(self, tmp_path):
        path = write_csv(tmp_path / "nan.csv", ["collision,four,4,10,10,10,1.0,1.0,1.0"])
        with pytest.raises(SchemaMismatchError):
            load_table("x", path)

    def test_header_only_is_empty(self, tmp_path):
        path = write_csv(tmp_path / "empty.csv", [])
        with pytest.raises(EmptyInputError, match="no data rows"):
            load_table("x", path)


class TestSpecValidation:
    def test_no_inputs(self, tmp_path):
        with pytest.raises(EmptyInputError):
            make_spec(tmp_path)

    def test_duplicate_labels(self, tmp_path, oracle_csv):
        with pytest.raises(SchemaMismatchError, match="duplicate run labels"):
            make_spec(tmp_path, ("a", oracle_csv), ("a", oracle_csv))

    def test_bad_kind_and_metric(self, tmp_path, oracle_csv):
        with pytest.raises(ValueError):
            make_spec(tmp_path, ("a", oracle_csv), kind="scatter")
        with pytest.raises(ValueError):
            make_spec(tmp_path, ("a", oracle_csv), metric="f1")

    def test_mixed_families_across_files(self, tmp_path, oracle_csv):
        astro = write_csv(tmp_path / "astro.csv", ["astro,4,4,10,10,10,1.0,1.0,1.0"])
        spec = make_spec(tmp_path, ("a", oracle_csv), ("b", astro))
        with pytest.raises(SchemaMismatchError, match="multiple families"):
            build_figure(spec)


class TestLines:
    def test_series_per_run_plus_chance(self, tmp_path, oracle_csv, random_csv):
        fig = build_figure(make_spec(tmp_path, ("oracle", oracle_csv), ("random", random_csv)))
        try:
            ax = fig.axes[0]
            assert len(ax.get_lines()) == 3  # two runs + chance reference
            assert len(chance_lines(ax, CHANCE_LEVELS["collision"])) == 1
            oracle_line = next(l for l in ax.get_lines() if l.get_label() == "oracle")
            assert list(oracle_line.get_xdata()) == [4, 8, 16]
            assert list(oracle_line.get_ydata()) == [1.0, 1.0, 1.0]
            random_line = next(l for l in ax.get_lines() if l.get_label() == "random")
            assert all(abs(y - 0.25) < 0.25 for y in random_line.get_ydata())
            assert ax.get_xlabel() == "m = n"
        finally:
            plt.close(fig)

    def test_missing_diagonal_bin_renders_as_gap(self, tmp_path):
        sparse = write_csv(tmp_path / "sparse.csv", [
            "collision,4,4,10,10,10,1.0,1.0,1.0",
            "collision,16,16,10,10,5,0.5,1.0,0.5",
        ])
        full = write_csv(tmp_path / "full.csv", [
            "collision,4,4,10,10,10,1.0,1.0,1.0",
            "collision,8,8,10,10,10,1.0,1.0,1.0",
            "collision,16,16,10,10,10,1.0,1.0,1.0",
        ])
        fig = build_figure(make_spec(tmp_path, ("sparse", sparse), ("full", full)))
        try:
            line = next(l for l in fig.axes[0].get_lines() if l.get_label() == "sparse")
            ys = list(line.get_ydata())
            assert len(ys) == 3
            assert ys[0] == 1.0 and math.isnan(ys[1]) and ys[2] == 0.5
        finally:
            plt.close(fig)

    def test_off_diagonal_rows_ignored(self, tmp_path):
        path = write_csv(tmp_path / "offdiag.csv", [
            "collision,4,4,10,10,10,1.0,1.0,1.0",
            "collision,4,8,10,10,10,1.0,1.0,1.0",
        ])
        fig = build_figure(make_spec(tmp_path, ("run", path)))
        try:
            line = next(l for l in fig.axes[0].get_lines() if l.get_label() == "run")
            assert list(line.get_xdata()) == [4]
        finally:
            plt.close(fig)

    def test_no_diagonal_rows_is_empty(self, tmp_path):
        path = write_csv(tmp_path / "offdiag.csv", ["collision,4,8,10,10,10,1.0,1.0,1.0"])
        with pytest.raises(EmptyInputError, match="diagonal"):
            build_figure(make_spec(tmp_path, ("run", path)))


class TestHeatmap:
    def test_panel_per_run_with_full_grid(self, tmp_path):
        rows = [
            f"collision,{m},{n},10,10,10,1.0,1.0,1.0"
            for m in (4, 8) for n in (4, 8)
        ]
        path = write_csv(tmp_path / "grid.csv", rows)
        fig = build_figure(make_spec(tmp_path, ("run", path), kind="heatmap"))
        try:
            panel = fig.axes[0]
            (image,) = panel.get_images()
            assert image.get_array().shape == (2, 2)
            assert panel.get_xlabel() == "m" and panel.get_ylabel() == "n"
            assert panel.get_title() == "run"
        finally:
            plt.close(fig)

    def test_missing_bins_masked_not_interpolated(self, tmp_path, oracle_csv):
        # The oracle fixture is diagonal-only: a 3x3 panel with 6 masked cells.
        fig = build_figure(make_spec(tmp_path, ("oracle", oracle_csv), kind="heatmap"))
        try:
            (image,) = fig.axes[0].get_images()
            data = image.get_array()
            assert data.shape == (3, 3)
            assert data.mask.sum() == 6
            assert all(not data.mask[i][i] for i in range(3))
        finally:
            plt.close(fig)


class TestPwCompare:
    def test_paired_series_with_flaky_run(self, tmp_path, flaky_csv):
        fig = build_figure(make_spec(tmp_path, ("flaky", flaky_csv), kind="pw_compare"))
        try:
            ax = fig.axes[0]
            raw = next(l for l in ax.get_lines() if l.get_label() == "flaky raw")
            pw = next(l for l in ax.get_lines() if l.get_label() == "flaky parsed-weighted")
            assert all(y >= 0.99 for y in raw.get_ydata())
            assert all(abs(y - 0.5) <= 0.15 for y in pw.get_ydata())
            assert raw.get_color() == pw.get_color()
            assert len(chance_lines(ax, CHANCE_LEVELS["collision"])) == 1
        finally:
            plt.close(fig)


class TestPlotOutput:
    def test_png_reruns_byte_identical(self, tmp_path, oracle_csv):
        a = plot(make_spec(tmp_path, ("oracle", oracle_csv), name="a.png"))
        b = plot(make_spec(tmp_path, ("oracle", oracle_csv), name="b.png"))
        assert a.read_bytes() == b.read_bytes()

    def test_svg_output(self, tmp_path, oracle_csv):
        out = plot(make_spec(tmp_path, ("oracle", oracle_csv), name="fig.svg"))
        head = out.read_bytes()[:256]
        assert b"<?xml" in head or b"<svg" in head

    def test_inputs_untouched(self, tmp_path, oracle_csv):
        before = oracle_csv.read_bytes()
        plot(make_spec(tmp_path, ("oracle", oracle_csv), kind="heatmap", name="h.png"))
        assert oracle_csv.read_bytes() == before
