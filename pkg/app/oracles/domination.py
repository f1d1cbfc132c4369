"""
Size-bounded exact solvers for domination and set cover.

Both are hitting problems: every element must be hit by a chosen option
(a vertex hits its closed neighborhood, a set hits its members). The search
branches on the options hitting the lowest unhit element, deepening the size
bound one step at a time, and then fixes the lexicographically smallest
optimum one position at a time.
"""

from typing import List, Optional, Sequence

from app.instances.graph import Graph, members
from app.instances.setcover import SetCoverInstance
from app.models.schemas import SolveResult
from app.oracles.common import SearchCounter
from app.utils.exceptions import OracleException


class HittingSearch:
    """Minimum number of options whose coverage masks hit every element."""

    def __init__(self, coverage: Sequence[int], element_count: int, counter: SearchCounter):
        self.coverage = coverage
        self.full = (1 << element_count) - 1
        self.counter = counter
        hitters = [0] * element_count
        for option, mask in enumerate(coverage):
            for element in members(mask):
                hitters[element] |= 1 << option
        self.hitters = hitters

    def feasible(self, covered: int, budget: int, forbidden: int) -> bool:
        """Whether at most `budget` more non-forbidden options finish the cover."""
        self.counter.tick()
        if covered == self.full:
            return True
        if budget == 0:
            return False
        remaining = self.full & ~covered
        element = (remaining & -remaining).bit_length() - 1
        for option in members(self.hitters[element] & ~forbidden):
            if self.feasible(covered | self.coverage[option], budget - 1, forbidden):
                return True
            forbidden |= 1 << option
        return False

    def optimum(self, size_cap: int) -> Optional[List[int]]:
        """Lexicographically smallest minimum cover of size <= size_cap, or None."""
        size = next((k for k in range(size_cap + 1) if self.feasible(0, k, 0)), None)
        if size is None:
            return None
        chosen: List[int] = []
        covered, start = 0, 0
        for slot in range(size):
            for option in range(start, len(self.coverage)):
                below = (1 << (option + 1)) - 1
                if self.feasible(covered | self.coverage[option], size - slot - 1, below):
                    chosen.append(option)
                    covered |= self.coverage[option]
                    start = option + 1
                    break
        return chosen


def min_dominating_set_bounded(g: Graph, size_cap: Optional[int] = None,
                               budget: Optional[int] = None) -> SolveResult:
    """Smallest dominating set of size <= size_cap; value None when there is none."""
    cap = g.n if size_cap is None else min(size_cap, g.n)
    counter = SearchCounter("ds", budget)
    witness = HittingSearch(g.closed_masks(), g.n, counter).optimum(cap)
    if witness is None:
        return counter.result(None, (), True)
    return counter.result(len(witness), witness, g.dominates(witness))


def min_set_cover(inst: SetCoverInstance, size_cap: Optional[int] = None,
                  budget: Optional[int] = None) -> SolveResult:
    if not inst.is_feasible:
        raise OracleException("Set-cover instance is infeasible: the sets do not cover the ground set")
    cap = len(inst.sets) if size_cap is None else min(size_cap, len(inst.sets))
    counter = SearchCounter("setcover", budget)
    witness = HittingSearch(inst.set_masks(), inst.ground_size, counter).optimum(cap)
    if witness is None:
        return counter.result(None, (), True)
    return counter.result(len(witness), witness, inst.covers(witness))
