"""
Grouping reduction from Max-3SAT to independent set in a clique-partitioned graph.

Clauses are split into K contiguous groups of balanced size. Every partial
assignment to a group's variables that satisfies at least lambda*m/K of the
group's clauses becomes a vertex; vertices assigning some shared variable
differently are adjacent. Each group's vertices therefore form a clique, and
independent sets are consistent partial assignments.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.config import get_settings
from app.instances.formulas import Assignment, CnfFormula, clause_satisfied, count_satisfied
from app.instances.graph import CliquePartitionedGraph, Graph
from app.utils.exceptions import ReductionException, WitnessException
from app.utils.logger import logger


class GroupingParams(BaseModel):
    """K contiguous clause groups and the threshold parameter lambda."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    K: int = Field(ge=1)
    lam: Fraction
    grouping: Tuple[Tuple[int, ...], ...]

    @model_validator(mode="after")
    def _check_grouping(self):
        if not 0 < self.lam <= 1:
            raise ValueError(f"lambda must lie in (0, 1], got {self.lam}")
        if len(self.grouping) != self.K:
            raise ValueError(f"expected {self.K} groups, got {len(self.grouping)}")
        flat = [c for group in self.grouping for c in group]
        if flat != list(range(len(flat))):
            raise ValueError("groups must be contiguous and cover clauses 0..m-1 in order")
        sizes = [len(group) for group in self.grouping]
        if min(sizes) < 1 or max(sizes) - min(sizes) > 1:
            raise ValueError(f"group sizes {sizes} are not balanced")
        return self

    @classmethod
    def balanced(cls, m: int, K: int, lam) -> "GroupingParams":
        """Group i holds clauses floor(i*m/K) .. floor((i+1)*m/K) - 1."""
        if K < 1 or K > m:
            raise ReductionException(f"Need 1 <= K <= m, got K={K}, m={m}")
        lam = Fraction(lam)
        if not 0 < lam <= 1:
            raise ReductionException(f"lambda must lie in (0, 1], got {lam}")
        grouping = tuple(tuple(range(i * m // K, (i + 1) * m // K)) for i in range(K))
        return cls(K=K, lam=lam, grouping=grouping)

    @property
    def m(self) -> int:
        return sum(len(group) for group in self.grouping)

    @property
    def threshold(self) -> Fraction:
        return self.lam * self.m / self.K

    @property
    def equal_groups(self) -> bool:
        return self.m % self.K == 0


class GroupVertex(BaseModel):
    """Partial assignment a vertex of the grouping graph stands for."""
    model_config = ConfigDict(frozen=True)

    group: int
    variables: Tuple[int, ...]
    values: Tuple[bool, ...]

    def as_dict(self) -> Dict[int, bool]:
        return dict(zip(self.variables, self.values))


@dataclass(frozen=True)
class GroupedGraph:
    partition: CliquePartitionedGraph
    payload: Tuple[GroupVertex, ...]
    params: GroupingParams
    formula: CnfFormula

    @property
    def graph(self) -> Graph:
        return self.partition.graph

    def payload_json(self) -> List[dict]:
        return [
            {"id": i, "group": v.group, "assignment": {str(x): int(b) for x, b in zip(v.variables, v.values)}}
            for i, v in enumerate(self.payload)
        ]


@dataclass(frozen=True)
class GroupingVerdict:
    satisfied: int
    s: int
    bound: Fraction
    holds: bool


def group_variables(f: CnfFormula, params: GroupingParams) -> List[Tuple[int, ...]]:
    return [
        tuple(sorted({lit.var for c in group for lit in f.clauses[c]}))
        for group in params.grouping
    ]


def vertex_bound(f: CnfFormula, params: GroupingParams) -> int:
    """K * 2^(max s_i): a ceiling on the number of vertices."""
    return params.K * 2 ** max(len(v) for v in group_variables(f, params))


def _groups_met(f: CnfFormula, params: GroupingParams, bits: Sequence[bool]) -> List[int]:
    return [
        i for i, group in enumerate(params.grouping)
        if sum(clause_satisfied(f.clauses[c], bits) for c in group) >= params.threshold
    ]


def max3sat_to_is(f: CnfFormula, params: GroupingParams, variable_cap: Optional[int] = None) -> GroupedGraph:
    if not f.is_3cnf():
        raise ReductionException("Grouping reduction needs clauses of at most 3 literals")
    if params.m != f.m:
        raise ReductionException(f"Grouping covers {params.m} clauses, formula has {f.m}")
    cap = variable_cap or get_settings().group_variable_cap
    variables = group_variables(f, params)
    widest = max(len(v) for v in variables)
    if widest > cap:
        raise ReductionException(f"A clause group spans {widest} variables, cap is {cap}")

    payload: List[GroupVertex] = []
    blocks: List[Tuple[int, ...]] = []
    for i, (group, group_vars) in enumerate(zip(params.grouping, variables)):
        block = []
        s = len(group_vars)
        for code in range(2 ** s):
            values = tuple(bool((code >> (s - 1 - pos)) & 1) for pos in range(s))
            local = dict(zip(group_vars, values))
            met = sum(
                any(local[lit.var] == lit.positive for lit in f.clauses[c]) for c in group
            )
            if met >= params.threshold:
                block.append(len(payload))
                payload.append(GroupVertex(group=i, variables=group_vars, values=values))
        blocks.append(tuple(block))

    # conflict iff some shared variable gets opposite values
    var_masks, value_masks = [], []
    for vertex in payload:
        var_mask = value_mask = 0
        for x, value in zip(vertex.variables, vertex.values):
            var_mask |= 1 << x
            if value:
                value_mask |= 1 << x
        var_masks.append(var_mask)
        value_masks.append(value_mask)
    edges = set()
    for u in range(len(payload)):
        for v in range(u + 1, len(payload)):
            if var_masks[u] & var_masks[v] & (value_masks[u] ^ value_masks[v]):
                edges.add((u, v))

    graph = Graph(n=len(payload), edges=frozenset(edges))
    partition = CliquePartitionedGraph(graph=graph, blocks=blocks)
    logger.info(f"Grouping graph: K={params.K}, lambda={params.lam}, vertices={graph.n}, edges={graph.m}")
    return GroupedGraph(partition=partition, payload=tuple(payload), params=params, formula=f)


def check_grouping_bound(f: CnfFormula, params: GroupingParams, a: Assignment) -> GroupingVerdict:
    """Compare count_satisfied with lambda*m + s*(1-lambda)*m/K, s = groups meeting the threshold."""
    satisfied = count_satisfied(f, a)
    s = len(_groups_met(f, params, a.bits))
    m = params.m
    bound = params.lam * m + s * (1 - params.lam) * Fraction(m, params.K)
    holds = satisfied <= bound
    if not holds:
        logger.warning(f"Grouping bound exceeded: satisfied={satisfied}, s={s}, bound={bound}"
                       f" (groups equal: {params.equal_groups})")
    return GroupingVerdict(satisfied=satisfied, s=s, bound=bound, holds=holds)


def groups_met_count(f: CnfFormula, params: GroupingParams, a: Assignment) -> int:
    return len(_groups_met(f, params, a.bits))


def is_witness_to_assignment(grouped: GroupedGraph, S: Sequence[int]) -> Assignment:
    """Merge the partial assignments of an independent set; free variables are False."""
    if not grouped.graph.is_independent(S):
        raise WitnessException("Vertex set is not independent in the grouping graph")
    bits = [False] * grouped.formula.var_count
    for v in S:
        for x, value in grouped.payload[v].as_dict().items():
            bits[x] = value
    assignment = Assignment.of(bits)
    met = groups_met_count(grouped.formula, grouped.params, assignment)
    if met < len(set(S)):
        raise WitnessException(f"Merged assignment meets {met} groups, fewer than |S| = {len(set(S))}")
    return assignment


def assignment_to_is_witness(grouped: GroupedGraph, a: Assignment) -> List[int]:
    """One vertex per group the assignment meets: its restriction to that group."""
    chosen = []
    for i in _groups_met(grouped.formula, grouped.params, a.bits):
        for v in grouped.partition.blocks[i]:
            vertex = grouped.payload[v]
            if all(a[x] == value for x, value in zip(vertex.variables, vertex.values)):
                chosen.append(v)
                break
    if not grouped.graph.is_independent(chosen):
        raise WitnessException("Restrictions of one assignment conflict; grouping graph is inconsistent")
    return chosen


def grouping_alpha_bounds(params: GroupingParams, opt: int) -> Tuple[int, int]:
    """Range alpha(G_I) must lie in, given the Max-SAT optimum `opt`.

    Each met group satisfies at least lambda*m/K clauses, so alpha <= opt*K/(lambda*m).
    The lower side comes from the counting bound and is only claimed for equal
    groups; a short group can never reach lambda*m/K when lambda is close to 1.
    """
    m, K, lam = params.m, params.K, params.lam
    upper = min(K, math.floor(Fraction(opt * K) / (lam * m)))
    if not params.equal_groups:
        lower = 0
    elif lam == 1:
        lower = K if opt == m else 0
    else:
        lower = max(0, math.ceil((opt - lam * m) / ((1 - lam) * Fraction(m, K))))
    return lower, upper
