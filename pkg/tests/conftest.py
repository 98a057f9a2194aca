from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from catalogs import TINY_ROWS, make_catalog_file  # noqa: E402
from mockserver import MockEndpoint  # noqa: E402

from staterecall.taskgen.catalog import Catalog, load_catalog

__all__ = ["TINY_ROWS", "make_catalog_file"]


@pytest.fixture
def mock_endpoint():
    server = MockEndpoint().start()
    yield server
    server.stop()


@pytest.fixture
def tiny_catalog(tmp_path) -> Catalog:
    """Eight-row catalog, enough for m <= 8 without the bundled data file."""
    return load_catalog(make_catalog_file(tmp_path / "tiny.csv", TINY_ROWS))
