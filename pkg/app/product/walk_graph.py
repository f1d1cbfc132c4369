"""
Derandomized graph product G'_t.

Vertices of G'_t are the walks of length t-1 on an expander H over the vertex
set of G, identified by (start vertex, port sequence). Two distinct walks are
adjacent iff the union of the base vertices they visit is a clique in G.
Walk ids follow lexicographic (start, ports) order.
"""

from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import networkx as nx
import numpy as np

from app.config import get_settings
from app.expander.rotation import RotationGraph
from app.instances.graph import Graph
from app.models.schemas import WalkRecord
from app.utils.exceptions import ProductException, SizeCapException
from app.utils.logger import logger


@dataclass(frozen=True, eq=False)
class WalkGraph:
    """Product graph plus the walk behind every product vertex."""

    base: Graph
    expander: RotationGraph
    t: int
    visited: np.ndarray
    ports: np.ndarray
    graph: Graph

    @property
    def N(self) -> int:
        return self.graph.n

    def walk_table(self) -> List[WalkRecord]:
        return [
            WalkRecord(
                id=index,
                start=int(self.visited[index, 0]),
                ports=[int(p) for p in self.ports[index]],
                visited=[int(v) for v in self.visited[index]],
            )
            for index in range(self.N)
        ]

    def walks_inside(self, vertices) -> List[int]:
        """Ids of walks whose every visited vertex lies in the given set."""
        allowed = np.zeros(self.base.n, dtype=bool)
        allowed[list(vertices)] = True
        return [int(i) for i in np.flatnonzero(allowed[self.visited].all(axis=1))]


def enumerate_walks(h: RotationGraph, t: int):
    """Visited-vertex and port arrays of all walks with t-1 steps, in id order."""
    steps = t - 1
    count = h.d ** steps
    codes = np.arange(count, dtype=np.int64)
    ports = np.zeros((h.n * count, steps), dtype=np.int64)
    visited = np.zeros((h.n * count, t), dtype=np.int64)
    current = np.repeat(np.arange(h.n, dtype=np.int64), count)
    all_codes = np.tile(codes, h.n)
    visited[:, 0] = current
    for step in range(steps):
        digit = (all_codes // h.d ** (steps - 1 - step)) % h.d
        ports[:, step] = digit
        current = h.vertex_table[current, digit]
        visited[:, step + 1] = current
    return visited, ports


def derandomized_product(g: Graph, h: RotationGraph, t: int, vertex_cap: Optional[int] = None) -> WalkGraph:
    """Build G'_t on N = n * d^(t-1) vertices."""
    if t < 1:
        raise ProductException(f"Walk parameter t must be >= 1, got {t}")
    if h.n != g.n:
        raise ProductException(f"Expander has {h.n} vertices but the graph has {g.n}")
    cap = vertex_cap or get_settings().product_vertex_cap
    size = g.n * h.d ** (t - 1)
    if size > cap:
        logger.warning(f"Refusing product with {size} vertices (cap {cap})")
        raise SizeCapException(f"G'_{t} would have {size} vertices, cap is {cap}")

    visited, ports = enumerate_walks(h, t)
    closed = g.closed_masks()
    full = (1 << g.n) - 1

    # walks grouped by visited set; only sets that are cliques can have neighbors
    groups: Dict[int, List[int]] = defaultdict(list)
    common: Dict[int, int] = {}
    for index, row in enumerate(visited.tolist()):
        mask, shared = 0, full
        for v in row:
            mask |= 1 << v
            shared &= closed[v]
        if mask & ~shared:
            continue
        groups[mask].append(index)
        common[mask] = shared

    edges = set()
    keys = sorted(groups)
    for a_pos, a in enumerate(keys):
        members_a = groups[a]
        edges.update(
            (members_a[x], members_a[y])
            for x in range(len(members_a)) for y in range(x + 1, len(members_a))
        )
        for b in keys[a_pos + 1:]:
            if b & ~common[a]:
                continue
            for x in members_a:
                edges.update((min(x, y), max(x, y)) for y in groups[b])

    product = Graph(n=size, edges=frozenset(edges))
    logger.info(f"Built G'_{t}: n={g.n}, d={h.d}, N={size}, edges={product.m}")
    return WalkGraph(base=g, expander=h, t=t, visited=visited, ports=ports, graph=product)


def clique_blowup(g: Graph, s: int) -> Graph:
    """Replace each vertex by s mutually adjacent copies; copies of adjacent vertices are adjacent.

    Copy c of vertex v gets index v*s + c. The clique number scales by exactly s.
    """
    if s < 1:
        raise ProductException(f"Blow-up factor must be >= 1, got {s}")
    if s == 1:
        return g
    edges = set()
    for v in range(g.n):
        base = v * s
        edges.update((base + x, base + y) for x in range(s) for y in range(x + 1, s))
    for u, v in g.edges:
        edges.update((u * s + x, v * s + y) for x in range(s) for y in range(s))
    return Graph(n=g.n * s, edges=frozenset(edges))


def pad_isolated(g: Graph, n: int) -> Graph:
    """Add isolated vertices up to n; the clique number is unchanged."""
    if n < g.n:
        raise ProductException(f"Cannot pad a {g.n}-vertex graph down to {n}")
    return Graph(n=n, edges=g.edges)


def product_clique_number(walks: WalkGraph) -> Tuple[int, List[int]]:
    """omega(G'_t) and a maximum clique of walk ids.

    A set of walks is pairwise adjacent iff their joint visited set is a clique
    of G, so the maximum is the largest walk count inside a maximal clique of G
    (or a single walk when that count is smaller than one).
    """
    best: List[int] = [0] if walks.N else []
    for clique in nx.find_cliques(walks.base.to_networkx()):
        inside = walks.walks_inside(clique)
        if len(inside) > len(best) or (len(inside) == len(best) and inside < best):
            best = inside
    return len(best), best
