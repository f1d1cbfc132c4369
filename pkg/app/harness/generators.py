"""
Seeded random instances for the verification suites.
"""

from typing import Optional

import networkx as nx
import numpy as np

from app.instances.formulas import CnfFormula, LinSystem, build_formula, build_system
from app.instances.graph import CliquePartitionedGraph, Graph, build_partition
from app.instances.setcover import SetCoverInstance


def make_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def random_graph(n: int, p: float, rng: np.random.Generator) -> Graph:
    seed = int(rng.integers(0, 2 ** 32))
    return Graph.from_networkx(nx.gnp_random_graph(n, p, seed=seed))


def planted_clique(n: int, size: int, p: float, rng: np.random.Generator) -> Graph:
    """Random G(n, p) plus a clique on `size` randomly chosen vertices."""
    base = random_graph(n, p, rng)
    chosen = sorted(int(v) for v in rng.choice(n, size=size, replace=False))
    edges = set(base.edges)
    edges.update((u, v) for i, u in enumerate(chosen) for v in chosen[i + 1:])
    return Graph(n=n, edges=frozenset(edges))


def triangle_free(n: int, p: float, rng: np.random.Generator) -> Graph:
    """Random bipartite graph across a random split, hence triangle-free."""
    side = rng.integers(0, 2, size=n)
    edges = frozenset(
        (u, v) for u in range(n) for v in range(u + 1, n)
        if side[u] != side[v] and rng.random() < p
    )
    return Graph(n=n, edges=edges)


def random_3cnf(var_count: int, m: int, rng: np.random.Generator) -> CnfFormula:
    """Clauses of 1 to 3 distinct variables with random signs."""
    clauses = []
    for _ in range(m):
        width = int(rng.integers(1, min(3, var_count) + 1))
        variables = rng.choice(var_count, size=width, replace=False)
        clauses.append([(int(x), bool(rng.integers(0, 2))) for x in variables])
    return build_formula(var_count, clauses)


def random_lin3(var_count: int, m: int, rng: np.random.Generator) -> LinSystem:
    equations = []
    for _ in range(m):
        i, j, k = (int(x) for x in rng.choice(var_count, size=3, replace=False))
        equations.append((i, j, k, int(rng.integers(0, 2))))
    return build_system(var_count, equations)


def random_partitioned(K: int, max_block: int, p: float, rng: np.random.Generator) -> CliquePartitionedGraph:
    """K non-empty cliques with random cross edges of density p."""
    sizes = [int(rng.integers(1, max_block + 1)) for _ in range(K)]
    blocks, start = [], 0
    for size in sizes:
        blocks.append(tuple(range(start, start + size)))
        start += size
    edges = set()
    for block in blocks:
        edges.update((u, v) for i, u in enumerate(block) for v in block[i + 1:])
    for a in range(K):
        for b in range(a + 1, K):
            edges.update((u, v) for u in blocks[a] for v in blocks[b] if rng.random() < p)
    return build_partition(Graph(n=start, edges=frozenset(edges)), blocks)


def random_setcover(ground_size: int, set_count: int, rng: np.random.Generator,
                    density: Optional[float] = 0.3) -> SetCoverInstance:
    sets = [[e for e in range(ground_size) if rng.random() < density] for _ in range(set_count)]
    return SetCoverInstance(ground_size=ground_size, sets=sets)
