"""
Unit tests for the exact solvers.
"""

from itertools import combinations

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from app.harness.generators import make_rng, random_3cnf, random_graph
from app.instances.dimacs import parse_cnf, parse_lin3
from app.instances.formulas import Assignment, CnfFormula, count_satisfied
from app.instances.graph import Graph, complement
from app.instances.setcover import SetCoverInstance
from app.oracles.assignments import max_lin, max_sat, min_sat
from app.oracles.bipartite import max_induced_bipartite
from app.oracles.clique import max_clique, max_independent_set, min_vertex_cover, subexp_approx_is
from app.oracles.common import SearchCounter
from app.oracles.domination import min_dominating_set_bounded, min_set_cover
from app.utils.exceptions import BudgetExceededException, InternalOracleException, OracleException, SizeCapException
from tests.conftest import complete_graph, cycle_graph


@st.composite
def small_graphs(draw, max_n=6):
    n = draw(st.integers(min_value=1, max_value=max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph(n=n, edges=frozenset(p for p, keep in zip(pairs, chosen) if keep))


def exhaustive(g, accept, largest=True):
    sizes = range(g.n, -1, -1) if largest else range(g.n + 1)
    return next(k for k in sizes if any(accept(s) for s in combinations(range(g.n), k)))


def star(leaves: int) -> Graph:
    return Graph(n=leaves + 1, edges=frozenset((0, v) for v in range(1, leaves + 1)))


def hill_climb(f: CnfFormula, rng) -> int:
    """Satisfied clauses at a local optimum of single-bit flips from a random start."""
    def score(bits):
        return sum(any(bits[lit.var] == lit.positive for lit in clause) for clause in f.clauses)

    bits = [bool(b) for b in rng.integers(0, 2, size=f.var_count)]
    best = score(bits)
    improved = True
    while improved:
        improved = False
        for v in range(f.var_count):
            bits[v] = not bits[v]
            value = score(bits)
            if value > best:
                best, improved = value, True
            else:
                bits[v] = not bits[v]
    return best


class TestCliqueAndIndependentSet:
    """Tests for the branch-and-bound solvers."""

    def test_five_cycle(self, five_cycle):
        assert max_independent_set(five_cycle).value == 2
        assert max_clique(five_cycle).value == 2

    def test_complete(self):
        g = complete_graph(6)
        assert max_independent_set(g).value == 1
        assert max_clique(g).value == 6

    def test_lexicographically_smallest_witness(self, five_cycle):
        """Test ties are broken toward the smallest vertex list."""
        assert max_independent_set(five_cycle).witness == (0, 2)
        assert max_clique(five_cycle).witness == (0, 1)

    def test_empty_graph(self):
        assert max_clique(Graph(n=0)).value == 0

    @settings(max_examples=150, deadline=None)
    @given(small_graphs())
    def test_agrees_with_exhaustive_search(self, g):
        """Test alpha and omega against a 2^n scan, and omega through the complement."""
        assert max_independent_set(g).value == exhaustive(g, g.is_independent)
        assert max_clique(g).value == exhaustive(g, g.is_clique)
        assert max_clique(g).value == max_independent_set(complement(g)).value

    def test_vertex_cap(self):
        with pytest.raises(SizeCapException):
            max_clique(Graph(n=5), vertex_cap=4)

    def test_budget(self):
        """Test the node budget stops the search."""
        with pytest.raises(BudgetExceededException):
            max_clique(complete_graph(6), budget=1)


class TestVertexCover:
    """Tests for min_vertex_cover."""

    def test_triangle(self, triangle):
        assert min_vertex_cover(triangle).value == 2

    def test_perfect_matching(self):
        g = Graph(n=6, edges=frozenset({(0, 1), (2, 3), (4, 5)}))
        assert min_vertex_cover(g).value == 3

    @settings(max_examples=50, deadline=None)
    @given(small_graphs(max_n=8))
    def test_cover_plus_independent_set(self, g):
        assert min_vertex_cover(g).value == g.n - max_independent_set(g).value


class TestDomination:
    """Tests for min_dominating_set_bounded."""

    def test_star(self):
        result = min_dominating_set_bounded(star(5), size_cap=2)
        assert result.value == 1
        assert result.witness == (0,)

    def test_empty_graph(self):
        assert min_dominating_set_bounded(Graph(n=4), size_cap=4).value == 4

    def test_nothing_within_cap(self):
        """Test 'none within the cap' is reported, not raised."""
        result = min_dominating_set_bounded(Graph(n=4), size_cap=2)
        assert result.value is None
        assert not result.found

    @settings(max_examples=100, deadline=None)
    @given(small_graphs(max_n=7))
    def test_agrees_with_exhaustive_search(self, g):
        assert min_dominating_set_bounded(g).value == exhaustive(g, g.dominates, largest=False)

    @pytest.mark.parametrize("n, p, seed", [(9, 0.3, 0), (10, 0.2, 1), (11, 0.25, 2), (12, 0.15, 3), (12, 0.3, 4)])
    def test_agrees_with_subset_scan(self, n, p, seed):
        """Test the bounded search against all 2^n vertex subsets."""
        g = random_graph(n, p, make_rng(seed))
        closed = [1 << v for v in range(n)]
        for u, v in g.edges:
            closed[u] |= 1 << v
            closed[v] |= 1 << u
        full = (1 << n) - 1
        best = n
        for subset in range(1 << n):
            covered = 0
            for v in range(n):
                if subset >> v & 1:
                    covered |= closed[v]
            if covered == full:
                best = min(best, bin(subset).count("1"))
        assert min_dominating_set_bounded(g).value == best


class TestInducedBipartite:
    """Tests for max_induced_bipartite."""

    def test_complete(self):
        assert max_induced_bipartite(complete_graph(4)).value == 2

    def test_even_cycle(self):
        assert max_induced_bipartite(cycle_graph(6)).value == 6

    def test_odd_cycle(self, five_cycle):
        assert max_induced_bipartite(five_cycle).value == 4

    def test_vertex_cap(self):
        with pytest.raises(SizeCapException):
            max_induced_bipartite(Graph(n=17))

    @pytest.mark.parametrize("n, p, seed", [(6, 0.5, 0), (7, 0.6, 1), (8, 0.4, 2), (9, 0.5, 3), (10, 0.35, 4), (10, 0.6, 5)])
    def test_agrees_with_networkx_bipartiteness(self, n, p, seed):
        """Test against the largest subset networkx finds free of odd cycles."""
        g = random_graph(n, p, make_rng(seed))
        nx_graph = g.to_networkx()
        best = next(
            size for size in range(n, 0, -1)
            if any(nx.is_bipartite(nx_graph.subgraph(s)) for s in combinations(range(n), size))
        )
        result = max_induced_bipartite(g)
        assert result.value == best
        assert nx.is_bipartite(nx_graph.subgraph(result.witness))


class TestAssignments:
    """Tests for MaxSAT, MinSAT and Max-3LIN."""

    def test_single_clause(self):
        f = parse_cnf("p cnf 1 1\n1 0\n")
        assert max_sat(f).value == 1
        result = min_sat(f)
        assert result.value == 0
        assert result.witness == (0,)

    def test_single_equation(self):
        assert max_lin(parse_lin3("p lin3 3 1\n1 2 3 0\n")).value == 1

    def test_contradictory_equations(self):
        system = parse_lin3("p lin3 3 2\n1 2 3 0\n1 2 3 1\n")
        assert max_lin(system).value == 1

    def test_witness_is_lexicographically_smallest(self):
        """Test x_0 is the most significant bit of the scan."""
        f = parse_cnf("p cnf 2 1\n2 0\n")
        assert max_sat(f).witness == (0, 1)

    def test_variable_cap(self):
        with pytest.raises(SizeCapException):
            max_sat(CnfFormula(var_count=25))

    def test_at_least_hill_climbing(self):
        """Test 100 seeded formulas never beat the exact optimum by local search."""
        for seed in range(100):
            rng = make_rng(seed)
            f = random_3cnf(8, 24, rng)
            result = max_sat(f)
            assert result.value >= hill_climb(f, rng)
            assert result.value == count_satisfied(f, Assignment.of(result.witness))


class TestSetCover:
    """Tests for min_set_cover."""

    def test_singletons(self):
        inst = SetCoverInstance(ground_size=4, sets=[[0], [1], [2], [3]])
        assert min_set_cover(inst).value == 4

    def test_one_full_set(self):
        inst = SetCoverInstance(ground_size=3, sets=[[0], [0, 1, 2], [1]])
        result = min_set_cover(inst)
        assert result.value == 1
        assert result.witness == (1,)

    def test_infeasible(self):
        with pytest.raises(OracleException):
            min_set_cover(SetCoverInstance(ground_size=3, sets=[[0, 1]]))


class TestSubexpApproximation:
    """Tests for the subset-scan approximation scheme."""

    def test_empty_graph(self):
        assert subexp_approx_is(Graph(n=5), 2).value == 2

    def test_complete(self):
        assert subexp_approx_is(complete_graph(5), 3).value == 1

    @settings(max_examples=60, deadline=None)
    @given(small_graphs(max_n=9), st.integers(min_value=1, max_value=4))
    def test_value_is_min_of_alpha_and_cap(self, g, c):
        assert subexp_approx_is(g, c).value == min(max_independent_set(g).value, c)

    def test_budget_checked_up_front(self):
        with pytest.raises(BudgetExceededException):
            subexp_approx_is(Graph(n=30), 5, budget=1000)


class TestSearchCounter:
    """Tests for the shared result plumbing."""

    def test_invalid_witness_is_an_internal_error(self):
        with pytest.raises(InternalOracleException):
            SearchCounter("clique").result(2, (0, 1), valid=False)

    def test_result_carries_explored(self):
        counter = SearchCounter("clique")
        counter.tick(3)
        assert counter.result(1, (0,), True).explored == 3
