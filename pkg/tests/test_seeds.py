from __future__ import annotations

import hashlib

import pytest
from hypothesis import given, strategies as st

from staterecall.taskgen.seeds import MAX_SEED, Family, derive_instance_seed


def _reference_derivation(base: int, family: Family, m: int, n: int, index: int) -> int:
    # The documented derivation, recomputed here from primitives.
    digest = hashlib.sha256(
        base.to_bytes(8, "big") + f"{family.value}|{m}|{n}|{index}".encode("utf-8")
    ).digest()
    return int.from_bytes(digest[:8], "big")


def test_derivation_matches_documented_formula():
    for base in (0, 7, 123456789, MAX_SEED):
        for family in Family:
            assert derive_instance_seed(base, family, 4, 8, 3) == _reference_derivation(
                base, family, 4, 8, 3
            )


def test_frozen_golden_values():
    # Pinned: these exact integers are baked into every stored run.
    assert derive_instance_seed(0, Family.COLLISION, 8, 8, 7) == 10951924645348703544
    assert derive_instance_seed(0, Family.ASTRO, 4, 4, 0) == 11718491942776741673
    assert derive_instance_seed(0, Family.ASTRO, 4, 4, 1) == 18185488847111955223
    assert derive_instance_seed(123456789, Family.ASTRO, 64, 64, 99) == 10018036097660841238


def test_deterministic():
    a = derive_instance_seed(99, Family.ASTRO, 16, 32, 41)
    b = derive_instance_seed(99, Family.ASTRO, 16, 32, 41)
    assert a == b


def test_neighboring_indices_diverge():
    a = derive_instance_seed(0, Family.ASTRO, 4, 4, 0)
    b = derive_instance_seed(0, Family.ASTRO, 4, 4, 1)
    assert a != b


def test_families_diverge():
    assert derive_instance_seed(5, Family.ASTRO, 4, 4, 0) != derive_instance_seed(
        5, Family.COLLISION, 4, 4, 0
    )


@given(
    st.integers(min_value=0, max_value=MAX_SEED),
    st.sampled_from(list(Family)),
    st.integers(min_value=2, max_value=64),
    st.integers(min_value=0, max_value=64),
    st.integers(min_value=0, max_value=99),
)
def test_result_is_valid_u64(base, family, m, n, index):
    seed = derive_instance_seed(base, family, m, n, index)
    assert 0 <= seed <= MAX_SEED


def test_base_seed_out_of_range():
    with pytest.raises(ValueError):
        derive_instance_seed(-1, Family.ASTRO, 4, 4, 0)
    with pytest.raises(ValueError):
        derive_instance_seed(1 << 64, Family.ASTRO, 4, 4, 0)
