"""
Exhaustive MaxSAT, MinSAT and Max-3LIN over all 2^n assignments.

Assignments are scanned as integers with x_0 as the most significant bit, so
ascending codes are lexicographic bit vectors and the first optimum is the
lexicographically smallest one.
"""

from typing import Callable, Optional, Union

import numpy as np

from app.instances.formulas import Assignment, CnfFormula, LinSystem, count_satisfied
from app.models.schemas import SolveResult
from app.oracles.common import SearchCounter
from app.utils.exceptions import SizeCapException

ASSIGNMENT_VARIABLE_CAP = 24
CHUNK = 1 << 16


def _bit_columns(codes: np.ndarray, var_count: int) -> np.ndarray:
    """Boolean matrix (codes x variables) of the assignment bits."""
    shifts = np.arange(var_count - 1, -1, -1, dtype=np.int64)
    return ((codes[:, None] >> shifts[None, :]) & 1).astype(bool)


def _cnf_counts(f: CnfFormula) -> Callable[[np.ndarray], np.ndarray]:
    def counts(bits: np.ndarray) -> np.ndarray:
        total = np.zeros(bits.shape[0], dtype=np.int64)
        for clause in f.clauses:
            hit = np.zeros(bits.shape[0], dtype=bool)
            for literal in clause:
                column = bits[:, literal.var]
                hit |= column if literal.positive else ~column
            total += hit
        return total
    return counts


def _lin_counts(system: LinSystem) -> Callable[[np.ndarray], np.ndarray]:
    def counts(bits: np.ndarray) -> np.ndarray:
        total = np.zeros(bits.shape[0], dtype=np.int64)
        for eq in system.equations:
            parity = bits[:, eq.i] ^ bits[:, eq.j] ^ bits[:, eq.k]
            total += parity == bool(eq.b)
        return total
    return counts


def _scan(problem: str, instance: Union[CnfFormula, LinSystem], maximize: bool,
          budget: Optional[int]) -> SolveResult:
    n = instance.var_count
    if n > ASSIGNMENT_VARIABLE_CAP:
        raise SizeCapException(f"Exhaustive assignment search is limited to {ASSIGNMENT_VARIABLE_CAP} variables, got {n}")
    counter = SearchCounter(problem, budget)
    counter.require(2 ** n)
    counts = _lin_counts(instance) if isinstance(instance, LinSystem) else _cnf_counts(instance)
    best_value, best_code = None, 0
    for start in range(0, 2 ** n, CHUNK):
        codes = np.arange(start, min(start + CHUNK, 2 ** n), dtype=np.int64)
        counter.tick(len(codes))
        values = counts(_bit_columns(codes, n))
        index = int(np.argmax(values) if maximize else np.argmin(values))
        value = int(values[index])
        if best_value is None or (value > best_value if maximize else value < best_value):
            best_value, best_code = value, int(codes[index])
    bits = [(best_code >> (n - 1 - v)) & 1 for v in range(n)]
    valid = count_satisfied(instance, Assignment.of(bits)) == best_value
    return counter.result(best_value, bits, valid)


def max_sat(f: CnfFormula, budget: Optional[int] = None) -> SolveResult:
    return _scan("maxsat", f, True, budget)


def min_sat(f: CnfFormula, budget: Optional[int] = None) -> SolveResult:
    """Fewest clauses any assignment can satisfy."""
    return _scan("minsat", f, False, budget)


def max_lin(system: LinSystem, budget: Optional[int] = None) -> SolveResult:
    return _scan("maxlin", system, True, budget)
