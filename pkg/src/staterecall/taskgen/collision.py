"""Collision Simulator: equal-mass elastic collisions on a line.

Particles carry integer velocities; when two collide they simply exchange
velocities, so the velocity multiset is invariant and the simulator is a
permutation replay.  Collision sequences never repeat the immediately
preceding unordered pair.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from staterecall.rng import PortableRng
from staterecall.taskgen.naming import name_index, particle_label


class UnknownParticleError(Exception):
    """A collision references a particle that has no velocity."""


class SelfCollisionError(Exception):
    """Both sides of a collision are the same particle."""


class PoolExhaustedError(Exception):
    """m plus the three distractors exceeds the velocity pool size."""


class DegenerateNoUndoError(Exception):
    """With two particles there is one pair only, so n >= 2 cannot satisfy
    the no-undo constraint."""


DEFAULT_VELOCITY_POOL: tuple[int, ...] = tuple(range(100))

OPTION_LETTERS: tuple[str, ...] = ("A", "B", "C", "D")


@dataclass(frozen=True)
class CollisionInstance:
    m: int
    n: int
    seed: int
    velocities: Mapping[str, int]
    collisions: tuple[tuple[str, str], ...]
    query_particle: str
    options: tuple[int, int, int, int]
    correct_letter: str

    @property
    def option_letters(self) -> tuple[str, ...]:
        return OPTION_LETTERS

    @property
    def option_texts(self) -> tuple[str, ...]:
        return tuple(str(v) for v in self.options)


def simulate_collisions(
    velocities: Mapping[str, int], collisions: Sequence[tuple[str, str]]
) -> dict[str, int]:
    """Replay collisions in order; each one exchanges the pair's velocities."""
    state = dict(velocities)
    for a, b in collisions:
        if a == b:
            raise SelfCollisionError(f"particle {a!r} cannot collide with itself")
        for label in (a, b):
            if label not in state:
                raise UnknownParticleError(f"unknown particle {label!r}")
        state[a], state[b] = state[b], state[a]
    return state


def generate_collision(
    m: int,
    n: int,
    instance_seed: int,
    pool: Sequence[int] = DEFAULT_VELOCITY_POOL,
) -> CollisionInstance:
    """Generate one Collision Simulator instance.

    Draw order (fixed): initial velocities, the n collision pairs (redrawing
    any pair equal to its predecessor), the query particle, the three
    distractors, the option shuffle.
    """
    if m < 2:
        raise ValueError("m must be at least 2")
    if n < 0:
        raise ValueError("n must be non-negative")
    if m + 3 > len(pool):
        raise PoolExhaustedError(f"m={m} plus 3 distractors exceeds pool size {len(pool)}")
    if len(set(pool)) != len(pool):
        raise ValueError("velocity pool values must be distinct")
    if m == 2 and n >= 2:
        raise DegenerateNoUndoError("m=2 admits a single pair; n >= 2 cannot avoid an immediate undo")

    rng = PortableRng(instance_seed)
    labels = [particle_label(i) for i in range(m)]
    drawn = rng.sample(pool, m)
    velocities = {labels[i]: drawn[i] for i in range(m)}

    collisions: list[tuple[str, str]] = []
    previous: tuple[int, int] | None = None
    for _ in range(n):
        while True:
            i, j = rng.sample(range(m), 2)
            pair = (i, j) if i < j else (j, i)
            if pair != previous:
                break
        previous = pair
        collisions.append((labels[pair[0]], labels[pair[1]]))

    query_particle = labels[rng.randbelow(m)]
    final = simulate_collisions(velocities, collisions)
    correct_value = final[query_particle]

    candidates = [v for v in pool if v != correct_value]
    distractors = rng.sample(candidates, 3)
    options = [correct_value, *distractors]
    rng.shuffle(options)
    correct_letter = OPTION_LETTERS[options.index(correct_value)]

    return CollisionInstance(
        m=m,
        n=n,
        seed=instance_seed,
        velocities=velocities,
        collisions=tuple(collisions),
        query_particle=query_particle,
        options=(options[0], options[1], options[2], options[3]),
        correct_letter=correct_letter,
    )


def sort_pair(a: str, b: str) -> tuple[str, str]:
    """Canonical (ordinal-sorted) form of an unordered particle pair."""
    return (a, b) if name_index(a) <= name_index(b) else (b, a)
