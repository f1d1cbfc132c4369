"""
Text formats for instances: DIMACS edge graphs, DIMACS CNF, the `p lin3`
format for 3-variable GF(2) systems, and set-cover JSON.

Indices are 1-based in text and 0-based in memory. Emission is canonical:
edges sorted, clause and equation order preserved (clause order is meaningful
to the grouping reduction), JSON keys sorted.

`p lin3 n m` format: one header line, then m lines `i j k b` meaning
x_i + x_j + x_k = b over GF(2), variables 1..n, b in {0, 1}. Lines starting
with `c` are comments in every text format.
"""

import hashlib
import json
from typing import Iterator, List, Tuple

from app.instances.formulas import CnfFormula, Equation, LinSystem, Literal
from app.instances.graph import Graph
from app.instances.setcover import SetCoverInstance
from app.utils.exceptions import (
    DuplicateEdgeException,
    IndexOutOfRangeException,
    MalformedHeaderException,
    MalformedLineException,
    ParseException,
    RepeatedVariableException,
    SelfLoopException,
)


def _content_lines(text: str) -> Iterator[Tuple[int, List[str]]]:
    for number, line in enumerate(text.splitlines(), start=1):
        tokens = line.split()
        if not tokens or tokens[0] == "c":
            continue
        yield number, tokens


def _header(lines: Iterator[Tuple[int, List[str]]], kind: str) -> Tuple[int, int]:
    try:
        number, tokens = next(lines)
    except StopIteration:
        raise MalformedHeaderException(f"missing `p {kind}` header")
    if len(tokens) != 4 or tokens[0] != "p" or tokens[1] != kind:
        raise MalformedHeaderException(f"line {number}: expected `p {kind} <n> <m>`, got {' '.join(tokens)!r}")
    try:
        n, m = int(tokens[2]), int(tokens[3])
    except ValueError:
        raise MalformedHeaderException(f"line {number}: header counts must be integers")
    if n < 0 or m < 0:
        raise MalformedHeaderException(f"line {number}: header counts must be non-negative")
    return n, m


def _int(token: str, number: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise MalformedLineException(f"line {number}: {token!r} is not an integer")


def parse_graph(text: str) -> Graph:
    """Parse a DIMACS edge file (`p edge n m`, `e u v` lines, 1-indexed)."""
    lines = _content_lines(text)
    n, m = _header(lines, "edge")
    edges = set()
    for number, tokens in lines:
        if tokens[0] != "e" or len(tokens) != 3:
            raise MalformedLineException(f"line {number}: expected `e <u> <v>`")
        u, v = _int(tokens[1], number), _int(tokens[2], number)
        if not (1 <= u <= n and 1 <= v <= n):
            raise IndexOutOfRangeException(f"line {number}: vertex outside 1..{n}")
        if u == v:
            raise SelfLoopException(f"line {number}: self-loop at vertex {u}")
        pair = (min(u, v) - 1, max(u, v) - 1)
        if pair in edges:
            raise DuplicateEdgeException(f"line {number}: duplicate edge {u} {v}")
        edges.add(pair)
    if len(edges) != m:
        raise MalformedHeaderException(f"header declares {m} edges but {len(edges)} are listed")
    return Graph(n=n, edges=frozenset(edges))


def emit_graph(g: Graph) -> str:
    lines = [f"p edge {g.n} {g.m}"]
    lines.extend(f"e {u + 1} {v + 1}" for u, v in g.sorted_edges())
    return "\n".join(lines) + "\n"


def parse_cnf(text: str) -> CnfFormula:
    """Parse DIMACS CNF; clauses are 0-terminated and may span lines."""
    lines = _content_lines(text)
    var_count, m = _header(lines, "cnf")
    clauses = []
    current: List[Literal] = []
    seen = set()
    number = 0
    for number, tokens in lines:
        if tokens[0] == "%":
            break
        for token in tokens:
            value = _int(token, number)
            if value == 0:
                if not current:
                    raise MalformedLineException(f"line {number}: empty clause")
                clauses.append(tuple(current))
                current, seen = [], set()
                continue
            var = abs(value)
            if var > var_count:
                raise IndexOutOfRangeException(f"line {number}: variable {var} outside 1..{var_count}")
            if var in seen:
                raise RepeatedVariableException(f"line {number}: variable {var} repeated in a clause")
            seen.add(var)
            current.append(Literal(var - 1, value > 0))
    if current:
        raise MalformedLineException(f"line {number}: last clause is not 0-terminated")
    if len(clauses) != m:
        raise MalformedHeaderException(f"header declares {m} clauses but {len(clauses)} are listed")
    return CnfFormula(var_count=var_count, clauses=tuple(clauses))


def emit_cnf(f: CnfFormula) -> str:
    lines = [f"p cnf {f.var_count} {f.m}"]
    for clause in f.clauses:
        tokens = [str(lit.var + 1) if lit.positive else str(-(lit.var + 1)) for lit in clause]
        lines.append(" ".join(tokens + ["0"]))
    return "\n".join(lines) + "\n"


def parse_lin3(text: str) -> LinSystem:
    lines = _content_lines(text)
    var_count, m = _header(lines, "lin3")
    equations = []
    for number, tokens in lines:
        if len(tokens) != 4:
            raise MalformedLineException(f"line {number}: expected `<i> <j> <k> <b>`")
        i, j, k, b = (_int(t, number) for t in tokens)
        for var in (i, j, k):
            if not 1 <= var <= var_count:
                raise IndexOutOfRangeException(f"line {number}: variable {var} outside 1..{var_count}")
        if len({i, j, k}) != 3:
            raise RepeatedVariableException(f"line {number}: equation repeats a variable")
        if b not in (0, 1):
            raise MalformedLineException(f"line {number}: right-hand side must be 0 or 1")
        equations.append(Equation(i - 1, j - 1, k - 1, b))
    if len(equations) != m:
        raise MalformedHeaderException(f"header declares {m} equations but {len(equations)} are listed")
    return LinSystem(var_count=var_count, equations=tuple(equations))


def emit_lin3(system: LinSystem) -> str:
    lines = [f"p lin3 {system.var_count} {system.m}"]
    lines.extend(f"{eq.i + 1} {eq.j + 1} {eq.k + 1} {eq.b}" for eq in system.equations)
    return "\n".join(lines) + "\n"


def parse_setcover(text: str) -> SetCoverInstance:
    """Parse {"ground_size": n, "sets": [[...], ...]} (0-indexed elements)."""
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as e:
        raise MalformedLineException(f"set-cover JSON is malformed: {e}")
    if not isinstance(payload, dict) or "ground_size" not in payload or "sets" not in payload:
        raise MalformedHeaderException("set-cover JSON needs `ground_size` and `sets`")
    ground_size = payload["ground_size"]
    if not isinstance(ground_size, int) or ground_size < 0:
        raise MalformedHeaderException("`ground_size` must be a non-negative integer")
    sets = []
    for index, members in enumerate(payload["sets"]):
        if not isinstance(members, list) or not all(isinstance(x, int) for x in members):
            raise MalformedLineException(f"set {index} must be a list of integers")
        for element in members:
            if not 0 <= element < ground_size:
                raise IndexOutOfRangeException(f"set {index} contains element {element} outside 0..{ground_size - 1}")
        sets.append(members)
    return SetCoverInstance(ground_size=ground_size, sets=sets)


def emit_setcover(instance: SetCoverInstance) -> str:
    payload = {"ground_size": instance.ground_size, "sets": [list(s) for s in instance.sets]}
    return json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n"


def emit_instance(instance) -> str:
    """Canonical text for any instance kind."""
    if isinstance(instance, Graph):
        return emit_graph(instance)
    if isinstance(instance, CnfFormula):
        return emit_cnf(instance)
    if isinstance(instance, LinSystem):
        return emit_lin3(instance)
    if isinstance(instance, SetCoverInstance):
        return emit_setcover(instance)
    raise ParseException(f"No text format for {type(instance).__name__}")


def instance_digest(instance_or_text) -> str:
    """sha256 hex digest of canonical instance bytes."""
    text = instance_or_text if isinstance(instance_or_text, str) else emit_instance(instance_or_text)
    return hashlib.sha256(text.encode("utf-8")).hexdigest()
