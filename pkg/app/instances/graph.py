"""
Simple undirected graphs and clique-partitioned graphs.
Vertices are the indices 0..n-1; edges are stored as sorted pairs.
"""

from typing import Dict, FrozenSet, Iterable, List, Tuple

import networkx as nx
from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, ValidationError, field_validator, model_validator

from app.utils.exceptions import InstanceException

Edge = Tuple[int, int]


class Graph(BaseModel):
    """Immutable simple graph on vertices 0..n-1."""
    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=0)
    edges: FrozenSet[Edge] = frozenset()
    _masks: Tuple[int, ...] = PrivateAttr(default=())

    @field_validator("edges", mode="before")
    @classmethod
    def _normalize_edges(cls, value):
        if isinstance(value, frozenset) and all(isinstance(e, tuple) and e[0] < e[1] for e in value):
            return value
        normalized = set()
        for u, v in value:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            pair = (u, v) if u < v else (v, u)
            if pair in normalized:
                raise ValueError(f"duplicate edge {pair}")
            normalized.add(pair)
        return frozenset(normalized)

    @model_validator(mode="after")
    def _check_range(self):
        for u, v in self.edges:
            if u < 0 or v >= self.n:
                raise ValueError(f"edge ({u}, {v}) outside 0..{self.n - 1}")
        masks = [0] * self.n
        for u, v in self.edges:
            masks[u] |= 1 << v
            masks[v] |= 1 << u
        self._masks = tuple(masks)
        return self

    @property
    def m(self) -> int:
        return len(self.edges)

    def sorted_edges(self) -> List[Edge]:
        return sorted(self.edges)

    def masks(self) -> Tuple[int, ...]:
        """Open-neighborhood bitmask per vertex, computed once at validation."""
        return self._masks

    def closed_masks(self) -> Tuple[int, ...]:
        """Closed-neighborhood bitmask per vertex."""
        return tuple(mask | (1 << v) for v, mask in enumerate(self.masks()))

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def degree(self, v: int) -> int:
        return bin(self.masks()[v]).count("1")

    def is_clique(self, vertices: Iterable[int]) -> bool:
        """True when every pair of distinct vertices is adjacent; singletons qualify."""
        masks = self.masks()
        chosen = set(vertices)
        mask = mask_of(chosen)
        return all((masks[v] | (1 << v)) & mask == mask for v in chosen)

    def is_independent(self, vertices: Iterable[int]) -> bool:
        masks = self.masks()
        chosen = set(vertices)
        mask = mask_of(chosen)
        return all(masks[v] & mask == 0 for v in chosen)

    def dominates(self, vertices: Iterable[int]) -> bool:
        covered = 0
        closed = self.closed_masks()
        for v in set(vertices):
            covered |= closed[v]
        return covered == (1 << self.n) - 1

    def is_bipartite_induced(self, vertices: Iterable[int]) -> bool:
        return two_coloring(self, vertices) is not None

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges)
        return g

    @classmethod
    def from_networkx(cls, g: nx.Graph) -> "Graph":
        """Relabel nodes to 0..n-1 in sorted order and drop self-loops."""
        order = {node: i for i, node in enumerate(sorted(g.nodes()))}
        edges = {tuple(sorted((order[u], order[v]))) for u, v in g.edges() if u != v}
        return cls(n=len(order), edges=frozenset(edges))


def mask_of(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def members(mask: int) -> List[int]:
    """Vertex indices set in a bitmask, ascending."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def two_coloring(g: Graph, vertices: Iterable[int]):
    """Proper 2-coloring of the induced subgraph as {vertex: 0|1}, or None if not bipartite."""
    masks = g.masks()
    allowed = mask_of(vertices)
    color: Dict[int, int] = {}
    for root in members(allowed):
        if root in color:
            continue
        color[root] = 0
        stack = [root]
        while stack:
            v = stack.pop()
            for u in members(masks[v] & allowed):
                if u not in color:
                    color[u] = 1 - color[v]
                    stack.append(u)
                elif color[u] == color[v]:
                    return None
    return color


def build_graph(n: int, edges: Iterable[Edge]) -> Graph:
    """Construct a Graph, surfacing validation failures as InstanceException."""
    try:
        return Graph(n=n, edges=list(edges))
    except ValidationError as e:
        raise InstanceException(f"Invalid graph: {e.errors()[0]['msg']}") from e


def complement(g: Graph) -> Graph:
    """Graph with (u, v) present iff absent in g, u != v."""
    edges = frozenset(
        (u, v) for u in range(g.n) for v in range(u + 1, g.n) if (u, v) not in g.edges
    )
    return Graph(n=g.n, edges=edges)


def induced_subgraph(g: Graph, vertices: Iterable[int]) -> Graph:
    """Subgraph on the given vertices, relabelled in ascending order."""
    order = {v: i for i, v in enumerate(sorted(set(vertices)))}
    edges = frozenset(
        (order[u], order[v]) for u, v in g.edges if u in order and v in order
    )
    return Graph(n=len(order), edges=edges)


class CliquePartitionedGraph(BaseModel):
    """Graph whose vertex set is partitioned into K blocks, each inducing a clique.

    Blocks may be empty (a clause group no assignment satisfies); consumers that
    need non-empty blocks check `has_empty_block`.
    """
    model_config = ConfigDict(frozen=True)

    graph: Graph
    blocks: Tuple[Tuple[int, ...], ...]

    @field_validator("blocks", mode="before")
    @classmethod
    def _sort_blocks(cls, value):
        return tuple(tuple(sorted(block)) for block in value)

    @model_validator(mode="after")
    def _validate_partition(self):
        if len(self.blocks) < 1:
            raise ValueError("a clique partition needs at least one block")
        seen = set()
        for i, block in enumerate(self.blocks):
            for v in block:
                if v < 0 or v >= self.graph.n:
                    raise ValueError(f"block {i} contains vertex {v} outside the graph")
                if v in seen:
                    raise ValueError(f"vertex {v} appears in more than one block")
                seen.add(v)
            if not self.graph.is_clique(block):
                raise ValueError(f"block {i} has a non-adjacent pair")
        if len(seen) != self.graph.n:
            missing = sorted(set(range(self.graph.n)) - seen)
            raise ValueError(f"vertices {missing[:5]} are not covered by any block")
        return self

    @property
    def K(self) -> int:
        return len(self.blocks)

    @property
    def has_empty_block(self) -> bool:
        return any(len(block) == 0 for block in self.blocks)

    def block_of(self) -> Dict[int, int]:
        return {v: i for i, block in enumerate(self.blocks) for v in block}

    def cross_edges(self) -> List[Edge]:
        """Edges whose endpoints lie in different blocks, sorted."""
        owner = self.block_of()
        return [e for e in self.graph.sorted_edges() if owner[e[0]] != owner[e[1]]]


def build_partition(graph: Graph, blocks: Iterable[Iterable[int]]) -> CliquePartitionedGraph:
    """Validate a clique partition, surfacing failures as InstanceException."""
    try:
        return CliquePartitionedGraph(graph=graph, blocks=[tuple(b) for b in blocks])
    except ValidationError as e:
        raise InstanceException(f"Invalid clique partition: {e.errors()[0]['msg']}") from e
