"""
This is a configuration file for pytest containing customizations and fixtures.

Tests whose node id contains "_int_" are marked as integration tests and are
skipped by the default run (see addopts in pyproject.toml).
"""

from __future__ import annotations

import io
import json
from pathlib import Path

import pytest
from _pytest.nodes import Item

from thermogenus.cli.run import parse_args, run
from thermogenus.genus import ManifoldClassData

FIXTURES = Path(__file__).parent / "fixtures"
PACKAGED_MANIFOLDS = Path(__file__).parent.parent / "src" / "thermogenus" / "config" / "manifolds"


def pytest_collection_modifyitems(items: list[Item]):
    for item in items:
        if "_int_" in item.nodeid:
            item.add_marker(pytest.mark.integration)


@pytest.fixture(scope="session")
def oracle_values():
    """Reference values for the closed-form checks."""
    with (FIXTURES / "oracle_values.json").open() as f:
        return json.load(f)


@pytest.fixture(scope="session")
def manifold_dir():
    return PACKAGED_MANIFOLDS


@pytest.fixture
def cp2(manifold_dir):
    return ManifoldClassData.load(manifold_dir / "cp2.json")


@pytest.fixture
def k3(manifold_dir):
    return ManifoldClassData.load(manifold_dir / "k3.json")


@pytest.fixture
def cli_run():
    """Run the command line in-process; returns (exit code, artifact text)."""

    def _run(*argv):
        stream = io.StringIO()
        code = run(parse_args(list(argv)), stream=stream)
        return code, stream.getvalue()

    return _run
