from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from staterecall.taskgen.naming import name_index, particle_label, variable_name


@pytest.mark.parametrize(
    "index,expected",
    [(0, "a"), (1, "b"), (25, "z"), (26, "aa"), (27, "ab"), (51, "az"), (52, "ba"), (701, "zz"), (702, "aaa")],
)
def test_variable_name_sequence(index, expected):
    assert variable_name(index) == expected


def test_particle_labels_are_uppercase():
    assert particle_label(0) == "A"
    assert particle_label(25) == "Z"
    assert particle_label(26) == "AA"
    assert particle_label(63) == "BL"


@given(st.integers(min_value=0, max_value=10_000))
def test_roundtrip(index):
    assert name_index(variable_name(index)) == index
    assert name_index(particle_label(index)) == index


def test_unique_over_first_1000():
    names = [variable_name(i) for i in range(1000)]
    assert len(set(names)) == 1000


def test_invalid_inputs():
    with pytest.raises(ValueError):
        variable_name(-1)
    with pytest.raises(ValueError):
        name_index("")
    with pytest.raises(ValueError):
        name_index("a1")
