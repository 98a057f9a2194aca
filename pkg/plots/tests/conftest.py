from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from staterecall.baselines import make_spec
from staterecall.runner import RunConfig, execute_run
from staterecall.taskgen import Family

DIAGONAL = ((4, 4), (8, 8), (16, 16))


@pytest.fixture(scope="session")
def metrics_dir(tmp_path_factory) -> Path:
    """Real metrics CSVs, produced by actually running the harness once."""
    root = tmp_path_factory.mktemp("metrics")
    solvers = {
        "oracle": make_spec("oracle"),
        "random": make_spec("random", rng_seed=11),
        "flaky": make_spec("flaky-format", rng_seed=13, fail_rate=0.5, inner="oracle"),
    }
    for name, solver in solvers.items():
        cfg = RunConfig(
            family=Family.COLLISION,
            solver=solver,
            output_dir=root,
            run_id=name,
            grid=DIAGONAL,
            instances_per_bin=30,
            base_seed=2,
        )
        execute_run(cfg)
    return root


@pytest.fixture(scope="session")
def oracle_csv(metrics_dir) -> Path:
    return metrics_dir / "oracle" / "metrics.csv"


@pytest.fixture(scope="session")
def random_csv(metrics_dir) -> Path:
    return metrics_dir / "random" / "metrics.csv"


@pytest.fixture(scope="session")
def flaky_csv(metrics_dir) -> Path:
    return metrics_dir / "flaky" / "metrics.csv"
