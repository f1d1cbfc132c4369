"""
Independent set -> maximum induced bipartite subgraph.

Two copies of G; copy-internal edges repeat E, and v_i of the first copy meets
v_j of the second iff i = j or (v_i, v_j) is an edge. MIBS of the output is
exactly 2 * alpha(G).
"""

from typing import List, Sequence

from app.instances.graph import Graph, two_coloring
from app.utils.exceptions import WitnessException


def is_to_cb(g: Graph) -> Graph:
    n = g.n
    edges = set()
    for u, v in g.edges:
        edges.update({(u, v), (n + u, n + v), (u, n + v), (v, n + u)})
    edges.update((v, n + v) for v in range(n))
    return Graph(n=2 * n, edges=frozenset(edges))


def is_witness_to_cb(g: Graph, S: Sequence[int]) -> List[int]:
    """Both copies of an independent set induce a perfect matching."""
    chosen = sorted(set(S))
    if not g.is_independent(chosen):
        raise WitnessException("Vertex set is not independent")
    return chosen + [g.n + v for v in chosen]


def cb_witness_to_is(g: Graph, vertices: Sequence[int]) -> List[int]:
    """Larger color class of an induced bipartite subgraph of is_to_cb(g), mapped back to g.

    A color class never holds both copies of a vertex, so the map is injective
    and the image has at least half as many vertices as the subgraph.
    """
    doubled = is_to_cb(g)
    coloring = two_coloring(doubled, vertices)
    if coloring is None:
        raise WitnessException("Vertex set does not induce a bipartite subgraph")
    classes = [sorted(v % g.n for v, c in coloring.items() if c == side) for side in (0, 1)]
    best = max(classes, key=lambda image: (len(image), [-v for v in image]))
    if len(set(best)) != len(best) or not g.is_independent(best):
        raise WitnessException("Color class does not map to an independent set")
    return best
