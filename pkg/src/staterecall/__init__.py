"""Benchmark generation and evaluation for joint recall + state-tracking tasks.

Two procedurally generated task families are provided: Astro Recall, which
binds variables to rows of an exoplanet table and shuffles them through swap
operations, and Collision Simulator, which tracks particle velocities through
chains of elastic collisions.  Every instance has a deterministic oracle
answer, and the evaluation harness scores free-form model output with exact
letter matching plus a parsed-weighted accuracy metric.
"""

from staterecall.taskgen import Family, derive_instance_seed, generate_instance

__version__ = "0.1.0"

__all__ = ["Family", "derive_instance_seed", "generate_instance", "__version__"]
