"""Scripted solvers that stand in for a model endpoint.

These exist to test the harness, not to compete: the oracle pins accuracy at
exactly 1.0, the random solver converges to chance, the stateless solver
ignores every update, and the flaky wrapper mangles output formatting at a
known rate.  Together they exercise every branch of the parse/score/aggregate
pipeline with known expected values.

Each (solver, instance) pair gets its own RNG stream derived by hashing the
spec seed, the instance seed, and the solver name, so outputs are stable under
concurrency and unaffected by evaluation order.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from enum import Enum
from typing import Any

from staterecall.rng import PortableRng
from staterecall.taskgen.astro import AstroInstance
from staterecall.taskgen.instance import TaskInstance
from staterecall.taskgen.seeds import MAX_SEED

FLAKY_FILLER = "I could not settle on a final option within the available budget."


class BaselineName(str, Enum):
    ORACLE = "oracle"
    RANDOM = "random"
    STATELESS = "stateless"
    FLAKY_FORMAT = "flaky-format"


@dataclass(frozen=True)
class BaselineSpec:
    name: BaselineName
    rng_seed: int = 0
    fail_rate: float | None = None
    inner: "BaselineSpec | None" = None

    def __post_init__(self) -> None:
        if not 0 <= self.rng_seed <= MAX_SEED:
            raise ValueError("rng_seed out of 64-bit range")
        if self.name is BaselineName.FLAKY_FORMAT:
            if self.fail_rate is None or not 0.0 <= self.fail_rate <= 1.0:
                raise ValueError("flaky-format requires fail_rate in [0, 1]")
            if self.inner is None:
                raise ValueError("flaky-format requires an inner baseline")
            if self.inner.name is BaselineName.FLAKY_FORMAT:
                raise ValueError("flaky-format cannot wrap itself")
        else:
            if self.fail_rate is not None or self.inner is not None:
                raise ValueError(f"{self.name.value} takes neither fail_rate nor inner")

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"name": self.name.value, "rng_seed": self.rng_seed}
        if self.name is BaselineName.FLAKY_FORMAT:
            out["fail_rate"] = self.fail_rate
            out["inner"] = self.inner.to_dict()  # type: ignore[union-attr]
        return out

    @staticmethod
    def from_dict(data: dict[str, Any]) -> "BaselineSpec":
        name = BaselineName(data["name"])
        if name is BaselineName.FLAKY_FORMAT:
            return BaselineSpec(
                name=name,
                rng_seed=data.get("rng_seed", 0),
                fail_rate=data["fail_rate"],
                inner=BaselineSpec.from_dict(data["inner"]),
            )
        return BaselineSpec(name=name, rng_seed=data.get("rng_seed", 0))


def _instance_rng(spec: BaselineSpec, instance: TaskInstance) -> PortableRng:
    digest = hashlib.sha256(
        spec.rng_seed.to_bytes(8, "big")
        + instance.instance_seed.to_bytes(8, "big")
        + spec.name.value.encode("utf-8")
    ).digest()
    return PortableRng(int.from_bytes(digest[:8], "big"))


def _answer_json(value: str) -> str:
    return json.dumps({"answer": value}, separators=(",", ":"))


def _stateless_belief(instance: TaskInstance) -> str:
    """The answer a solver would give if no swap/collision had happened."""
    payload = instance.payload
    if isinstance(payload, AstroInstance):
        row = payload.rows[payload.binding[payload.query_var]]
        return row.cells[payload.retrieve_column]
    return str(payload.velocities[payload.query_particle])


def solve(instance: TaskInstance, spec: BaselineSpec) -> str:
    """Produce a synthetic raw completion for one instance."""
    payload = instance.payload
    if spec.name is BaselineName.ORACLE:
        return _answer_json(payload.correct_letter)
    if spec.name is BaselineName.RANDOM:
        rng = _instance_rng(spec, instance)
        return _answer_json(rng.choice(payload.option_letters))
    if spec.name is BaselineName.STATELESS:
        # Emits its believed *value*, not a letter: the parser's option-text
        # matching resolves it, and beliefs no longer among the options
        # surface as InvalidOption rather than a silent wrong letter.
        return _answer_json(_stateless_belief(instance))
    rng = _instance_rng(spec, instance)
    inner_text = solve(instance, spec.inner)  # type: ignore[arg-type]
    if rng.random() < spec.fail_rate:  # type: ignore[operator]
        return FLAKY_FILLER
    return inner_text


def make_spec(
    name: str,
    rng_seed: int = 0,
    fail_rate: float | None = None,
    inner: str | None = None,
) -> BaselineSpec:
    """Build a spec from CLI-style flat arguments."""
    parsed = BaselineName(name)
    if parsed is BaselineName.FLAKY_FORMAT:
        return BaselineSpec(
            name=parsed,
            rng_seed=rng_seed,
            fail_rate=0.5 if fail_rate is None else fail_rate,
            inner=make_spec(inner or BaselineName.ORACLE.value, rng_seed=rng_seed),
        )
    if fail_rate is not None or inner is not None:
        raise ValueError(f"baseline {name!r} takes neither fail_rate nor inner")
    return BaselineSpec(name=parsed, rng_seed=rng_seed)
