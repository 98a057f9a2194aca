"""Astro Recall: variable bindings over catalog rows, permuted by swap ops.

An instance binds variables a, b, ... to the target-column values of m
sampled catalog rows, applies n swap operations, and asks which row's
identity the query variable ends up pointing at.  The simulator is the
oracle: the correct answer is fully determined by replaying the swaps.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Sequence, TypeVar

from staterecall.rng import PortableRng
from staterecall.taskgen.catalog import Catalog, CatalogRow
from staterecall.taskgen.naming import variable_name

V = TypeVar("V")


class UnknownVariableError(Exception):
    """A swap references a variable that is not bound."""


class CatalogTooSmallError(Exception):
    """m exceeds the number of catalog rows."""


class UnsatisfiablePatternError(Exception):
    """The requested swap pattern cannot produce n ops at this m."""


class SwapPattern(str, Enum):
    """How the two sides of each swap op are drawn.

    anchored   left = (query, x), right = (x, y); x, y drawn without
               replacement from the variables other than the query.
    true-swap  left = (p, q), right = (q, p); a literal exchange.
    general    all four names drawn, each side without replacement,
               sides independent.
    """

    ANCHORED = "anchored"
    TRUE_SWAP = "true-swap"
    GENERAL = "general"


@dataclass(frozen=True)
class SwapOp:
    """One simultaneous assignment ``l1, l2 = r1, r2``."""

    left: tuple[str, str]
    right: tuple[str, str]

    def __post_init__(self) -> None:
        if self.left[0] == self.left[1]:
            raise ValueError(f"left names must differ: {self.left}")
        if self.right[0] == self.right[1]:
            raise ValueError(f"right names must differ: {self.right}")

    def render(self) -> str:
        return f"{self.left[0]}, {self.left[1]} = {self.right[0]}, {self.right[1]}"


@dataclass(frozen=True)
class AstroInstance:
    m: int
    n: int
    seed: int
    columns: tuple[str, ...]
    target_column: str
    retrieve_column: str
    rows: tuple[CatalogRow, ...]
    binding: Mapping[str, int]
    swaps: tuple[SwapOp, ...]
    query_var: str
    option_a: str
    option_b: str
    correct_letter: str

    @property
    def option_letters(self) -> tuple[str, ...]:
        return ("A", "B")

    @property
    def option_texts(self) -> tuple[str, ...]:
        return (self.option_a, self.option_b)


def simulate_swaps(initial: Mapping[str, V], swaps: Sequence[SwapOp]) -> dict[str, V]:
    """Apply swap ops in order and return the final variable map.

    Each op reads both right-hand values from the state before the op, then
    assigns them to the two left-hand names simultaneously; every other
    variable is untouched.
    """
    state = dict(initial)
    for op in swaps:
        for name in (*op.left, *op.right):
            if name not in state:
                raise UnknownVariableError(f"unbound variable {name!r} in {op.render()!r}")
        r0, r1 = state[op.right[0]], state[op.right[1]]
        state[op.left[0]] = r0
        state[op.left[1]] = r1
    return state


def generate_astro(
    catalog: Catalog,
    m: int,
    n: int,
    instance_seed: int,
    pattern: SwapPattern = SwapPattern.ANCHORED,
) -> AstroInstance:
    """Generate one Astro Recall instance, fully determined by the arguments.

    Draw order (fixed; part of the reproducibility contract):
    row sample, query variable (non-anchored patterns only), the n swap ops,
    the distractor row, the correct-letter position.
    """
    if m < 2:
        raise ValueError("m must be at least 2")
    if n < 0:
        raise ValueError("n must be non-negative")
    if m > len(catalog.rows):
        raise CatalogTooSmallError(f"m={m} exceeds catalog row count {len(catalog.rows)}")
    if pattern is SwapPattern.ANCHORED and n > 0 and m < 3:
        raise UnsatisfiablePatternError(
            "anchored swaps need two distinct non-query variables; m must be >= 3 when n > 0"
        )

    rng = PortableRng(instance_seed)
    row_ids = rng.sample(range(len(catalog.rows)), m)
    rows = tuple(catalog.rows[i] for i in row_ids)
    variables = [variable_name(i) for i in range(m)]
    binding = {variables[i]: i for i in range(m)}

    if pattern is SwapPattern.ANCHORED:
        query_var = variables[0]
    else:
        query_var = variables[rng.randbelow(m)]

    non_query = [name for name in variables if name != query_var]
    swaps: list[SwapOp] = []
    for _ in range(n):
        if pattern is SwapPattern.ANCHORED:
            x, y = rng.sample(non_query, 2)
            swaps.append(SwapOp(left=(query_var, x), right=(x, y)))
        elif pattern is SwapPattern.TRUE_SWAP:
            p, q = rng.sample(variables, 2)
            swaps.append(SwapOp(left=(p, q), right=(q, p)))
        else:
            l0, l1 = rng.sample(variables, 2)
            r0, r1 = rng.sample(variables, 2)
            swaps.append(SwapOp(left=(l0, l1), right=(r0, r1)))

    final = simulate_swaps(binding, swaps)
    correct_row = final[query_var]
    correct_text = rows[correct_row].cells[catalog.retrieve_column]
    other_rows = [i for i in range(m) if i != correct_row]
    distractor = rows[other_rows[rng.randbelow(m - 1)]].cells[catalog.retrieve_column]

    if rng.randbelow(2) == 0:
        option_a, option_b, correct_letter = correct_text, distractor, "A"
    else:
        option_a, option_b, correct_letter = distractor, correct_text, "B"

    return AstroInstance(
        m=m,
        n=n,
        seed=instance_seed,
        columns=catalog.columns,
        target_column=catalog.target_column,
        retrieve_column=catalog.retrieve_column,
        rows=rows,
        binding=binding,
        swaps=tuple(swaps),
        query_var=query_var,
        option_a=option_a,
        option_b=option_b,
        correct_letter=correct_letter,
    )
