"""
Exact clique and independent-set solvers on bit-packed vertex sets.

Branch-and-bound with a greedy-coloring upper bound. Vertices are branched on
in ascending order, include before exclude, so the first maximum found is the
lexicographically smallest one.
"""

import math
from itertools import combinations
from typing import List, Optional, Sequence

from app.config import get_settings
from app.instances.graph import Graph, members
from app.models.schemas import SolveResult
from app.oracles.common import SearchCounter
from app.utils.exceptions import SizeCapException


def _color_bound(candidates: int, masks: Sequence[int]) -> int:
    """Number of colors a greedy coloring of the candidate set uses."""
    colors = 0
    rest = candidates
    while rest:
        colors += 1
        available = rest
        while available:
            low = available & -available
            v = low.bit_length() - 1
            rest &= ~low
            available &= ~low & ~masks[v]
    return colors


def _greedy_clique(masks: Sequence[int], n: int) -> List[int]:
    best: List[int] = []
    for start in range(n):
        clique, candidates = [start], masks[start]
        while candidates:
            v = max(members(candidates), key=lambda u: bin(masks[u] & candidates).count("1"))
            clique.append(v)
            candidates &= masks[v]
        if len(clique) > len(best):
            best = clique
    return best


class CliqueSearch:
    """Maximum clique in the graph whose adjacency is given by `masks`."""

    def __init__(self, masks: Sequence[int], counter: SearchCounter):
        self.masks = masks
        self.counter = counter
        self.best: List[int] = []
        self.floor = 0

    def solve(self) -> List[int]:
        n = len(self.masks)
        if n == 0:
            return []
        # a clique as large as the greedy one must still be found, so the floor sits one below it
        self.floor = len(_greedy_clique(self.masks, n)) - 1
        self._expand([], (1 << n) - 1)
        return self.best

    def _target(self) -> int:
        return max(len(self.best), self.floor)

    def _expand(self, current: List[int], candidates: int) -> None:
        self.counter.tick()
        if not candidates:
            if len(current) > len(self.best) and len(current) > self.floor:
                self.best = list(current)
            return
        if len(current) + _color_bound(candidates, self.masks) <= self._target():
            return
        while candidates:
            if len(current) + bin(candidates).count("1") <= self._target():
                return
            low = candidates & -candidates
            v = low.bit_length() - 1
            current.append(v)
            self._expand(current, candidates & self.masks[v])
            current.pop()
            candidates &= ~low


def _check_size(g: Graph, cap: Optional[int]) -> None:
    limit = cap or get_settings().clique_vertex_cap
    if g.n > limit:
        raise SizeCapException(f"Exact clique search is limited to {limit} vertices, got {g.n}")


def max_clique(g: Graph, budget: Optional[int] = None, vertex_cap: Optional[int] = None) -> SolveResult:
    _check_size(g, vertex_cap)
    counter = SearchCounter("clique", budget)
    witness = CliqueSearch(g.masks(), counter).solve()
    return counter.result(len(witness), witness, g.is_clique(witness))


def max_independent_set(g: Graph, budget: Optional[int] = None,
                        vertex_cap: Optional[int] = None) -> SolveResult:
    _check_size(g, vertex_cap)
    counter = SearchCounter("is", budget)
    full = (1 << g.n) - 1
    complement = [full & ~mask & ~(1 << v) for v, mask in enumerate(g.masks())]
    witness = CliqueSearch(complement, counter).solve()
    return counter.result(len(witness), witness, g.is_independent(witness))


def min_vertex_cover(g: Graph, budget: Optional[int] = None) -> SolveResult:
    """Complement of a maximum independent set."""
    independent = max_independent_set(g, budget)
    counter = SearchCounter("vc", budget)
    counter.explored = independent.explored
    chosen = set(independent.witness)
    cover = [v for v in range(g.n) if v not in chosen]
    valid = all(u not in chosen or v not in chosen for u, v in g.edges)
    return counter.result(len(cover), cover, valid)


def subexp_approx_is(g: Graph, c: int, budget: Optional[int] = None) -> SolveResult:
    """Largest independent set among all vertex subsets of size at most c.

    Its size is min(alpha(g), c): every c-subset of a larger independent set is
    itself independent.
    """
    counter = SearchCounter("subexp-is", budget)
    top = max(0, min(c, g.n))
    counter.require(sum(math.comb(g.n, k) for k in range(top + 1)))
    masks = g.masks()
    for size in range(top, 0, -1):
        for subset in combinations(range(g.n), size):
            counter.tick()
            mask = 0
            for v in subset:
                mask |= 1 << v
            if all(masks[v] & mask == 0 for v in subset):
                return counter.result(size, subset, g.is_independent(subset))
    return counter.result(0, (), True)
