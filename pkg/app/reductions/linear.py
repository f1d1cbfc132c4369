"""
Max-3LIN -> vertex cover and vertex cover -> MinSAT.
"""

from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

from app.instances.formulas import Assignment, CnfFormula, Equation, LinSystem, Literal, count_satisfied
from app.instances.graph import Graph
from app.utils.exceptions import ReductionException, WitnessException
from app.utils.logger import logger


@dataclass(frozen=True)
class LinGraph:
    """Four vertices per equation: vertex 4q + r is the r-th satisfying local assignment of equation q."""
    graph: Graph
    system: LinSystem
    payload: Tuple[Tuple[int, Tuple[Tuple[int, int], ...]], ...]

    def local(self, v: int) -> Dict[int, int]:
        return dict(self.payload[v][1])

    def payload_json(self) -> List[dict]:
        return [
            {"id": v, "equation": q, "assignment": {str(x): b for x, b in local}}
            for v, (q, local) in enumerate(self.payload)
        ]


def _local_solutions(eq: Equation) -> List[Tuple[Tuple[int, int], ...]]:
    """The four (x_i, x_j, x_k) with odd/even parity b, x_i most significant."""
    variables = (eq.i, eq.j, eq.k)
    solutions = []
    for code in range(8):
        bits = ((code >> 2) & 1, (code >> 1) & 1, code & 1)
        if bits[0] ^ bits[1] ^ bits[2] == eq.b:
            solutions.append(tuple(zip(variables, bits)))
    return solutions


def lin3_to_vc(system: LinSystem) -> LinGraph:
    payload = [(q, local) for q, eq in enumerate(system.equations) for local in _local_solutions(eq)]
    locals_ = [dict(local) for _, local in payload]
    edges = set()
    for u in range(len(payload)):
        for v in range(u + 1, len(payload)):
            a, b = locals_[u], locals_[v]
            if any(b.get(x, value) != value for x, value in a.items()):
                edges.add((u, v))
    graph = Graph(n=4 * system.m, edges=frozenset(edges))
    logger.info(f"3LIN graph: {system.m} equations -> {graph.n} vertices, {graph.m} edges")
    return LinGraph(graph=graph, system=system, payload=tuple(payload))


def assignment_to_lin3_witness(lin: LinGraph, a: Assignment) -> List[int]:
    """Independent set with one vertex per equation the assignment satisfies."""
    chosen = []
    for v, (q, local) in enumerate(lin.payload):
        if all(int(a[x]) == b for x, b in local):
            chosen.append(v)
    if len(chosen) != count_satisfied(lin.system, a) or not lin.graph.is_independent(chosen):
        raise WitnessException("Assignment does not map to an independent set")
    return chosen


def lin3_witness_to_assignment(lin: LinGraph, S: Sequence[int]) -> Assignment:
    """Merge local assignments of an independent set; free variables are 0."""
    if not lin.graph.is_independent(S):
        raise WitnessException("Vertex set is not independent in the 3LIN graph")
    bits = [False] * lin.system.var_count
    for v in S:
        for x, b in lin.local(v).items():
            bits[x] = bool(b)
    assignment = Assignment.of(bits)
    if count_satisfied(lin.system, assignment) < len(set(S)):
        raise WitnessException("Merged assignment satisfies fewer equations than |S|")
    return assignment


@dataclass(frozen=True)
class MinSatReduction:
    """Variable x is edge edge_variables[x] = (i, j), i < j: positive in clause i, negative in clause j."""
    formula: CnfFormula
    edge_variables: Tuple[Tuple[int, int], ...]
    clause_vertices: Tuple[int, ...]

    def maps_json(self) -> dict:
        return {
            "edge_variables": [list(e) for e in self.edge_variables],
            "clause_vertices": list(self.clause_vertices),
        }


def vc_to_minsat(g: Graph) -> MinSatReduction:
    """One variable per edge, one clause per vertex; MinSAT equals minimum vertex cover."""
    isolated = [v for v in range(g.n) if g.degree(v) == 0]
    if isolated:
        raise ReductionException(f"Isolated vertices {isolated[:5]} would give empty clauses")
    edges = g.sorted_edges()
    clauses: List[List[Literal]] = [[] for _ in range(g.n)]
    for x, (i, j) in enumerate(edges):
        clauses[i].append(Literal(x, True))
        clauses[j].append(Literal(x, False))
    formula = CnfFormula(var_count=len(edges), clauses=tuple(tuple(c) for c in clauses))
    return MinSatReduction(formula=formula, edge_variables=tuple(edges), clause_vertices=tuple(range(g.n)))


def vertex_cover_to_minsat_assignment(reduction: MinSatReduction, cover: Sequence[int]) -> Assignment:
    """Each edge satisfies only the clause of a cover endpoint, so at most |cover| clauses hold."""
    chosen = set(cover)
    if any(i not in chosen and j not in chosen for i, j in reduction.edge_variables):
        raise WitnessException("Vertex set is not a vertex cover")
    assignment = Assignment.of([i in chosen for i, _ in reduction.edge_variables])
    if count_satisfied(reduction.formula, assignment) > len(chosen):
        raise WitnessException("Translated assignment satisfies more clauses than the cover size")
    return assignment


def minsat_assignment_to_vertex_cover(reduction: MinSatReduction, a: Assignment) -> List[int]:
    """Vertices whose clauses hold; every edge satisfies one endpoint's clause."""
    formula = reduction.formula
    cover = [
        reduction.clause_vertices[c]
        for c, clause in enumerate(formula.clauses)
        if any(literal.holds(a.bits) for literal in clause)
    ]
    chosen = set(cover)
    if any(i not in chosen and j not in chosen for i, j in reduction.edge_variables):
        raise WitnessException("Satisfied clauses do not cover every edge")
    return cover
