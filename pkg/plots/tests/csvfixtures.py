"""Handcrafted metrics-CSV helpers for schema and edge-case tests."""

from __future__ import annotations

from pathlib import Path

HEADER = "family,m,n,total,parsed,correct,accuracy,parsed_rate,parsed_weighted"


def write_csv(path: Path, data_lines: list[str], header: str = HEADER) -> Path:
    path.write_text("\n".join([header, *data_lines]) + "\n", encoding="utf-8")
    return path
