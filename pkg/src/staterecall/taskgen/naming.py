"""Alphabetic label sequences for variables and particles.

Variables follow a, b, ..., z, aa, ab, ... and particles the uppercase
equivalent.  The scheme is bijective base 26 (spreadsheet-column style), so
labels stay short, sort naturally at small counts, and decode back to their
ordinal.
"""

from __future__ import annotations

import string

_LOWER = string.ascii_lowercase


def variable_name(index: int) -> str:
    """Lowercase label for ordinal ``index`` (0 -> a, 25 -> z, 26 -> aa)."""
    if index < 0:
        raise ValueError("index must be non-negative")
    n = index + 1
    chars: list[str] = []
    while n > 0:
        n, rem = divmod(n - 1, 26)
        chars.append(_LOWER[rem])
    return "".join(reversed(chars))


def particle_label(index: int) -> str:
    """Uppercase label for ordinal ``index`` (0 -> A, 26 -> AA)."""
    return variable_name(index).upper()


def name_index(name: str) -> int:
    """Ordinal of a label produced by :func:`variable_name` or
    :func:`particle_label`."""
    if not name:
        raise ValueError("empty label")
    value = 0
    for ch in name.lower():
        pos = ord(ch) - ord("a")
        if not 0 <= pos < 26:
            raise ValueError(f"invalid label: {name!r}")
        value = value * 26 + pos + 1
    return value - 1
