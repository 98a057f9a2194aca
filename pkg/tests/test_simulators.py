"""Simulator semantics, pinned by hand-traced examples and properties.

The swap rule: both right-hand values are read from the pre-op state, then
assigned to the left names simultaneously (Python tuple-assignment
semantics).  The collision rule: the two particles exchange velocities.
"""

from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from staterecall.taskgen.astro import SwapOp, UnknownVariableError, simulate_swaps
from staterecall.taskgen.collision import (
    SelfCollisionError,
    UnknownParticleError,
    simulate_collisions,
)
from staterecall.taskgen.naming import particle_label, variable_name


def test_hand_traced_swap():
    # a takes c's old value, c takes e's old value, simultaneously.
    initial = {"a": 0, "b": 1, "c": 0, "d": 0, "e": 1}
    result = simulate_swaps(initial, [SwapOp(("a", "c"), ("c", "e"))])
    assert result == {"a": 0, "b": 1, "c": 1, "d": 0, "e": 1}


def test_no_swaps_is_identity():
    initial = {"a": 3, "b": 9}
    assert simulate_swaps(initial, []) == initial


def test_true_swap_exchanges():
    assert simulate_swaps({"a": 1, "b": 2}, [SwapOp(("a", "b"), ("b", "a"))]) == {"a": 2, "b": 1}


def test_swap_does_not_mutate_input():
    initial = {"a": 1, "b": 2}
    simulate_swaps(initial, [SwapOp(("a", "b"), ("b", "a"))])
    assert initial == {"a": 1, "b": 2}


def test_unknown_variable():
    with pytest.raises(UnknownVariableError):
        simulate_swaps({"a": 1, "b": 2}, [SwapOp(("a", "b"), ("b", "z"))])


@st.composite
def swap_programs(draw):
    m = draw(st.integers(min_value=2, max_value=10))
    names = [variable_name(i) for i in range(m)]
    initial = {name: draw(st.integers(min_value=-100, max_value=100)) for name in names}
    ops = []
    for _ in range(draw(st.integers(min_value=0, max_value=12))):
        left = tuple(draw(st.permutations(names)))[:2]
        right = tuple(draw(st.permutations(names)))[:2]
        ops.append(SwapOp(left, right))
    return initial, ops


@given(swap_programs())
def test_swap_closure(program):
    # Values may duplicate or vanish, but nothing new ever appears.
    initial, ops = program
    final = simulate_swaps(initial, ops)
    assert set(final) == set(initial)
    assert set(final.values()) <= set(initial.values())


@given(swap_programs())
def test_swap_agrees_with_sequential_interpreter(program):
    initial, ops = program
    state = dict(initial)
    for op in ops:
        (l1, l2), (r1, r2) = op.left, op.right
        v1, v2 = state[r1], state[r2]
        state[l1] = v1
        state[l2] = v2
    assert simulate_swaps(initial, ops) == state


def test_hand_traced_collisions():
    final = simulate_collisions({"A": 2, "B": 5, "C": 7}, [("A", "B"), ("B", "C")])
    assert final == {"A": 5, "B": 7, "C": 2}
    assert final["A"] == 5


def test_no_collisions_is_identity():
    assert simulate_collisions({"A": 2, "B": 5}, []) == {"A": 2, "B": 5}


def test_collision_involution():
    # Generation forbids immediate undo, but the simulator itself must
    # treat a repeated pair as a no-op overall.
    initial = {"A": 1, "B": 2, "C": 3}
    assert simulate_collisions(initial, [("A", "B"), ("A", "B")]) == initial


def test_self_collision_rejected():
    with pytest.raises(SelfCollisionError):
        simulate_collisions({"A": 1, "B": 2}, [("A", "A")])


def test_unknown_particle_rejected():
    with pytest.raises(UnknownParticleError):
        simulate_collisions({"A": 1, "B": 2}, [("A", "Q")])


@st.composite
def collision_programs(draw):
    m = draw(st.integers(min_value=2, max_value=12))
    labels = [particle_label(i) for i in range(m)]
    velocities = dict(
        zip(labels, draw(st.lists(st.integers(0, 99), min_size=m, max_size=m, unique=True)))
    )
    pairs = []
    for _ in range(draw(st.integers(min_value=0, max_value=15))):
        a, b = draw(st.permutations(labels))[:2]
        pairs.append((a, b))
    return velocities, pairs


@given(collision_programs())
def test_collision_conservation(program):
    velocities, pairs = program
    final = simulate_collisions(velocities, pairs)
    assert sorted(final.values()) == sorted(velocities.values())
    assert set(final) == set(velocities)
