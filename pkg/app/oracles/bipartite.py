"""
Maximum induced bipartite subgraph by exhaustive subset scan.
"""

from itertools import combinations
from typing import Optional

from app.instances.graph import Graph, two_coloring
from app.models.schemas import SolveResult
from app.oracles.common import SearchCounter
from app.utils.exceptions import SizeCapException

MIBS_VERTEX_CAP = 16


def max_induced_bipartite(g: Graph, budget: Optional[int] = None) -> SolveResult:
    """Largest vertex set inducing a bipartite subgraph; sizes are scanned downward."""
    if g.n > MIBS_VERTEX_CAP:
        raise SizeCapException(f"Induced-bipartite search is limited to {MIBS_VERTEX_CAP} vertices, got {g.n}")
    counter = SearchCounter("mibs", budget)
    counter.require(2 ** g.n)
    for size in range(g.n, 0, -1):
        for subset in combinations(range(g.n), size):
            counter.tick()
            if two_coloring(g, subset) is not None:
                return counter.result(size, subset, g.is_bipartite_induced(subset))
    return counter.result(0, (), True)
