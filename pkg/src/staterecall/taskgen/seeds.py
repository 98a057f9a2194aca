"""Seed plumbing: task families and per-instance seed derivation."""

from __future__ import annotations

import hashlib
from enum import Enum

MAX_SEED = (1 << 64) - 1


class Family(str, Enum):
    """The two task families handled by this package."""

    ASTRO = "astro"
    COLLISION = "collision"


def derive_instance_seed(base: int, family: Family, m: int, n: int, index: int) -> int:
    """Derive the 64-bit seed for one instance from a run-level base seed.

    The derivation is fixed so that independent implementations agree
    bit-for-bit: SHA-256 over ``key || message`` where ``key`` is the base
    seed as 8 big-endian bytes and ``message`` is the UTF-8 string
    ``"<family>|<m>|<n>|<index>"`` using the family's canonical lowercase
    name.  The first 8 digest bytes, read big-endian, are the seed.
    """
    if not 0 <= base <= MAX_SEED:
        raise ValueError("base seed must be a 64-bit unsigned integer")
    message = f"{Family(family).value}|{m}|{n}|{index}".encode("utf-8")
    digest = hashlib.sha256(base.to_bytes(8, "big") + message).digest()
    return int.from_bytes(digest[:8], "big")
