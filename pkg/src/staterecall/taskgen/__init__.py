"""Procedural task generation: seed derivation, catalogs, and both families."""

from staterecall.taskgen.astro import (
    AstroInstance,
    CatalogTooSmallError,
    SwapOp,
    SwapPattern,
    UnknownVariableError,
    UnsatisfiablePatternError,
    generate_astro,
    simulate_swaps,
)
from staterecall.taskgen.catalog import (
    Catalog,
    CatalogError,
    CatalogRow,
    DuplicateIdentityError,
    EmptyCatalogError,
    MissingColumnError,
    NonNumericTargetError,
    default_catalog_path,
    load_catalog,
)
from staterecall.taskgen.collision import (
    DEFAULT_VELOCITY_POOL,
    CollisionInstance,
    DegenerateNoUndoError,
    PoolExhaustedError,
    SelfCollisionError,
    UnknownParticleError,
    generate_collision,
    simulate_collisions,
)
from staterecall.taskgen.instance import (
    SCHEMA_VERSION,
    TaskInstance,
    canonical_json,
    generate_instance,
    payload_from_dict,
    payload_to_dict,
    task_from_dict,
    task_to_dict,
)
from staterecall.taskgen.naming import name_index, particle_label, variable_name
from staterecall.taskgen.seeds import MAX_SEED, Family, derive_instance_seed

__all__ = [
    "AstroInstance",
    "Catalog",
    "CatalogError",
    "CatalogRow",
    "CatalogTooSmallError",
    "CollisionInstance",
    "DEFAULT_VELOCITY_POOL",
    "DegenerateNoUndoError",
    "DuplicateIdentityError",
    "EmptyCatalogError",
    "Family",
    "MAX_SEED",
    "MissingColumnError",
    "NonNumericTargetError",
    "PoolExhaustedError",
    "SCHEMA_VERSION",
    "SelfCollisionError",
    "SwapOp",
    "SwapPattern",
    "TaskInstance",
    "UnknownParticleError",
    "UnknownVariableError",
    "UnsatisfiablePatternError",
    "canonical_json",
    "default_catalog_path",
    "derive_instance_seed",
    "generate_astro",
    "generate_collision",
    "generate_instance",
    "load_catalog",
    "name_index",
    "particle_label",
    "payload_from_dict",
    "payload_to_dict",
    "simulate_collisions",
    "simulate_swaps",
    "task_from_dict",
    "task_to_dict",
    "variable_name",
]
