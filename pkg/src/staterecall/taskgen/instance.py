"""Task instances and their canonical JSON form.

Serialization is canonical: fixed key order, compact separators, UTF-8 kept
as-is, and a ``schema`` version field.  Two generations from the same seed
therefore produce byte-identical lines, which the determinism checks and
golden files rely on.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any

from staterecall.taskgen.astro import AstroInstance, SwapOp
from staterecall.taskgen.catalog import Catalog, CatalogRow
from staterecall.taskgen.collision import CollisionInstance, generate_collision
from staterecall.taskgen.astro import SwapPattern, generate_astro
from staterecall.taskgen.collision import DEFAULT_VELOCITY_POOL
from staterecall.taskgen.seeds import Family, derive_instance_seed

SCHEMA_VERSION = 1

Payload = AstroInstance | CollisionInstance


@dataclass(frozen=True)
class TaskInstance:
    family: Family
    payload: Payload
    index: int
    instance_seed: int

    def __post_init__(self) -> None:
        expected = AstroInstance if self.family is Family.ASTRO else CollisionInstance
        if not isinstance(self.payload, expected):
            raise ValueError(f"payload type does not match family {self.family.value!r}")


def generate_instance(
    family: Family,
    m: int,
    n: int,
    index: int,
    base_seed: int,
    *,
    catalog: Catalog | None = None,
    pattern: SwapPattern = SwapPattern.ANCHORED,
    pool: tuple[int, ...] = DEFAULT_VELOCITY_POOL,
) -> TaskInstance:
    """Generate the instance at (family, m, n, index) under a base seed."""
    seed = derive_instance_seed(base_seed, family, m, n, index)
    if family is Family.ASTRO:
        if catalog is None:
            raise ValueError("astro generation requires a catalog")
        payload: Payload = generate_astro(catalog, m, n, seed, pattern)
    else:
        payload = generate_collision(m, n, seed, pool)
    return TaskInstance(family=family, payload=payload, index=index, instance_seed=seed)


def canonical_json(obj: dict[str, Any]) -> str:
    """Serialize a payload/instance dict in the canonical byte form."""
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":"))


def payload_to_dict(payload: Payload) -> dict[str, Any]:
    """Canonical dict form of an instance payload (documented key order)."""
    if isinstance(payload, AstroInstance):
        return {
            "schema": SCHEMA_VERSION,
            "family": Family.ASTRO.value,
            "m": payload.m,
            "n": payload.n,
            "seed": payload.seed,
            "columns": list(payload.columns),
            "target_column": payload.target_column,
            "retrieve_column": payload.retrieve_column,
            "rows": [[row.cells[c] for c in payload.columns] for row in payload.rows],
            "binding": dict(payload.binding),
            "swaps": [{"left": list(op.left), "right": list(op.right)} for op in payload.swaps],
            "query_var": payload.query_var,
            "option_a": payload.option_a,
            "option_b": payload.option_b,
            "correct_letter": payload.correct_letter,
        }
    return {
        "schema": SCHEMA_VERSION,
        "family": Family.COLLISION.value,
        "m": payload.m,
        "n": payload.n,
        "seed": payload.seed,
        "velocities": dict(payload.velocities),
        "collisions": [list(pair) for pair in payload.collisions],
        "query_particle": payload.query_particle,
        "options": list(payload.options),
        "correct_letter": payload.correct_letter,
    }


def payload_from_dict(data: dict[str, Any]) -> Payload:
    """Inverse of :func:`payload_to_dict`."""
    if data.get("schema") != SCHEMA_VERSION:
        raise ValueError(f"unsupported payload schema: {data.get('schema')!r}")
    family = Family(data["family"])
    if family is Family.ASTRO:
        columns = tuple(data["columns"])
        rows = tuple(CatalogRow(cells=dict(zip(columns, cells))) for cells in data["rows"])
        swaps = tuple(
            SwapOp(left=(op["left"][0], op["left"][1]), right=(op["right"][0], op["right"][1]))
            for op in data["swaps"]
        )
        return AstroInstance(
            m=data["m"],
            n=data["n"],
            seed=data["seed"],
            columns=columns,
            target_column=data["target_column"],
            retrieve_column=data["retrieve_column"],
            rows=rows,
            binding={k: int(v) for k, v in data["binding"].items()},
            swaps=swaps,
            query_var=data["query_var"],
            option_a=data["option_a"],
            option_b=data["option_b"],
            correct_letter=data["correct_letter"],
        )
    options = data["options"]
    return CollisionInstance(
        m=data["m"],
        n=data["n"],
        seed=data["seed"],
        velocities={k: int(v) for k, v in data["velocities"].items()},
        collisions=tuple((a, b) for a, b in data["collisions"]),
        query_particle=data["query_particle"],
        options=(options[0], options[1], options[2], options[3]),
        correct_letter=data["correct_letter"],
    )


def task_to_dict(task: TaskInstance) -> dict[str, Any]:
    """Canonical dict form of a full task instance (payload embedded)."""
    return {
        "schema": SCHEMA_VERSION,
        "family": task.family.value,
        "m": task.payload.m,
        "n": task.payload.n,
        "index": task.index,
        "instance_seed": task.instance_seed,
        "payload": payload_to_dict(task.payload),
    }


def task_from_dict(data: dict[str, Any]) -> TaskInstance:
    if data.get("schema") != SCHEMA_VERSION:
        raise ValueError(f"unsupported instance schema: {data.get('schema')!r}")
    return TaskInstance(
        family=Family(data["family"]),
        payload=payload_from_dict(data["payload"]),
        index=data["index"],
        instance_seed=data["instance_seed"],
    )
