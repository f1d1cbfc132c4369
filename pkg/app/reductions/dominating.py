"""
Independent set in a clique-partitioned graph -> dominating set, and
dominating set -> set cover.

Gadget layout for a partition with K blocks over n vertices:
    0 .. n-1                       clique copies C'_i (vertex v keeps index v)
    n .. n+K-1                     sentinels t_i
    next 3K*K                      guards S_i, 3K per block
    next 3K per cross-block edge   edge guards W_e, in sorted edge order
alpha(G) + gamma(G') = 2K.
"""

from dataclasses import dataclass
from typing import List, NamedTuple, Sequence, Tuple

from app.instances.graph import CliquePartitionedGraph, Graph
from app.instances.setcover import SetCoverInstance
from app.utils.exceptions import ReductionException, WitnessException
from app.utils.logger import logger


class VertexRole(NamedTuple):
    """kind is copy | sentinel | guard | edge_guard.

    copy: block, index = original vertex. sentinel: block. guard: block, index
    within S_i. edge_guard: block = position of the edge among cross edges,
    index within W_e.
    """
    kind: str
    block: int
    index: int


@dataclass(frozen=True)
class DsGadget:
    graph: Graph
    roles: Tuple[VertexRole, ...]
    K: int
    source: CliquePartitionedGraph
    cross_edges: Tuple[Tuple[int, int], ...]

    @property
    def n_source(self) -> int:
        return self.source.graph.n

    def sentinel(self, i: int) -> int:
        return self.n_source + i

    def guards(self, i: int) -> range:
        start = self.n_source + self.K + 3 * self.K * i
        return range(start, start + 3 * self.K)

    def edge_guards(self, e: int) -> range:
        start = self.n_source + self.K + 3 * self.K * self.K + 3 * self.K * e
        return range(start, start + 3 * self.K)

    def roles_json(self) -> List[dict]:
        return [{"id": v, "kind": r.kind, "block": r.block, "index": r.index} for v, r in enumerate(self.roles)]


def gadget_size(n: int, K: int, cross: int) -> int:
    return n + K + 3 * K * K + 3 * K * cross


def is_to_ds(g: CliquePartitionedGraph) -> DsGadget:
    if g.has_empty_block:
        raise ReductionException("Dominating-set gadget needs every block to be non-empty")
    n, K = g.graph.n, g.K
    owner = g.block_of()
    cross = tuple(g.cross_edges())
    roles: List[VertexRole] = [VertexRole("copy", owner[v], v) for v in range(n)]
    roles += [VertexRole("sentinel", i, 0) for i in range(K)]
    roles += [VertexRole("guard", i, j) for i in range(K) for j in range(3 * K)]
    roles += [VertexRole("edge_guard", e, j) for e in range(len(cross)) for j in range(3 * K)]

    edges = set()
    for i, block in enumerate(g.blocks):
        edges.update((u, v) for x, u in enumerate(block) for v in block[x + 1:])
        t = n + i
        edges.update((u, t) for u in block)
        start = n + K + 3 * K * i
        edges.update((u, s) for u in block for s in range(start, start + 3 * K))
    base = n + K + 3 * K * K
    for e, (u, v) in enumerate(cross):
        i, j = owner[u], owner[v]
        attached = [n + i, n + j]
        attached += [x for x in g.blocks[i] if x != u]
        attached += [x for x in g.blocks[j] if x != v]
        for w in range(base + 3 * K * e, base + 3 * K * (e + 1)):
            edges.update((x, w) for x in attached)

    graph = Graph(n=gadget_size(n, K, len(cross)), edges=frozenset(edges))
    logger.info(f"Dominating-set gadget: K={K}, cross edges={len(cross)}, vertices={graph.n}")
    return DsGadget(graph=graph, roles=tuple(roles), K=K, source=g, cross_edges=cross)


def is_witness_to_ds_witness(gadget: DsGadget, S: Sequence[int]) -> List[int]:
    """Copies of S, plus t_i and the lowest vertex of C'_i for every block S misses."""
    source = gadget.source
    chosen = sorted(set(S))
    if any(v < 0 or v >= source.graph.n for v in chosen) or not source.graph.is_independent(chosen):
        raise WitnessException("Vertex set is not independent in the partitioned graph")
    owner = source.block_of()
    hit = {owner[v] for v in chosen}
    T = list(chosen)
    for i, block in enumerate(source.blocks):
        if i not in hit:
            T += [gadget.sentinel(i), block[0]]
    T.sort()
    if len(T) != 2 * gadget.K - len(chosen) or not gadget.graph.dominates(T):
        raise WitnessException("Translated set does not dominate the gadget")
    return T


def normalize_ds_witness(gadget: DsGadget, T: Sequence[int]) -> List[int]:
    """Rewrite a dominating set toward one copy per block plus sentinels.

    Guard members become the lowest vertex of their block; a second copy inside
    a block becomes the block's sentinel; an edge guard becomes the sentinel of
    its lower block when domination survives the swap. Never grows the set.
    """
    source = gadget.source
    current = set(T)
    for v in sorted(current):
        role = gadget.roles[v]
        if role.kind == "guard":
            current.discard(v)
            current.add(source.blocks[role.block][0])
    for i, block in enumerate(source.blocks):
        picked = [v for v in block if v in current]
        for extra in picked[1:]:
            current.discard(extra)
            current.add(gadget.sentinel(i))
    owner = source.block_of()
    for v in sorted(current):
        role = gadget.roles[v]
        if role.kind == "edge_guard":
            u, _ = gadget.cross_edges[role.block]
            trial = (current - {v}) | {gadget.sentinel(owner[u])}
            if gadget.graph.dominates(trial):
                current = trial
    return sorted(current)


def ds_witness_to_is_witness(gadget: DsGadget, T: Sequence[int]) -> List[int]:
    """Independent set of size >= 2K - |T| read off a dominating set.

    Blocks without a sentinel and with exactly one copy in the normalized set
    contribute that copy. Two such copies can only be adjacent when their edge
    guard lies entirely inside the set, which pays for dropping one of them.
    """
    if not gadget.graph.dominates(T):
        raise WitnessException("Vertex set does not dominate the gadget")
    normalized = normalize_ds_witness(gadget, T)
    chosen = set(normalized)
    source = gadget.source
    picks = []
    for i, block in enumerate(source.blocks):
        inside = [v for v in block if v in chosen]
        if gadget.sentinel(i) not in chosen and len(inside) == 1:
            picks.append(inside[0])
    independent: List[int] = []
    for v in picks:
        if all(not source.graph.has_edge(u, v) for u in independent):
            independent.append(v)
    target = 2 * gadget.K - len(set(T))
    if not source.graph.is_independent(independent) or len(independent) < target:
        raise WitnessException(f"Recovered {len(independent)} independent vertices, expected at least {target}")
    return sorted(independent)


def ds_to_setcover(g: Graph) -> SetCoverInstance:
    """Ground set V, set i = N[v_i]; minimum cover size equals gamma(g)."""
    closed = g.closed_masks()
    sets = [[u for u in range(g.n) if (closed[v] >> u) & 1] for v in range(g.n)]
    return SetCoverInstance(ground_size=g.n, sets=sets)
