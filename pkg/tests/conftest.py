"""
Shared fixtures for the workbench tests.
"""

import pytest

from app.config import get_settings
from app.instances.graph import Graph, build_partition


@pytest.fixture(autouse=True)
def fresh_settings(monkeypatch, tmp_path):
    """Each test sees settings built from its own environment."""
    monkeypatch.setenv("LOG_FILE", str(tmp_path / "gapbench.log"))
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


def complete_graph(n: int) -> Graph:
    return Graph(n=n, edges=frozenset((u, v) for u in range(n) for v in range(u + 1, n)))


def cycle_graph(n: int) -> Graph:
    return Graph(n=n, edges=frozenset(tuple(sorted((v, (v + 1) % n))) for v in range(n)))


@pytest.fixture
def triangle():
    return complete_graph(3)


@pytest.fixture
def five_cycle():
    return cycle_graph(5)


@pytest.fixture
def two_block_graph():
    """Blocks {a, b} and {c} with the cross edge (a, c); alpha = 2 via {b, c}."""
    g = Graph(n=3, edges=frozenset({(0, 1), (0, 2)}))
    return build_partition(g, [[0, 1], [2]])


@pytest.fixture
def graph_file(tmp_path):
    """Write DIMACS text to a temporary file and return its path."""
    def write(text: str, name: str = "input.dimacs") -> str:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)
    return write
