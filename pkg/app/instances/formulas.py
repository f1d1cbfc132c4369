"""
CNF formulas, GF(2) linear systems with three variables per equation, and
truth assignments. Variables are 0-indexed internally.
"""

from typing import NamedTuple, Sequence, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from app.utils.exceptions import InstanceException


class Literal(NamedTuple):
    var: int
    positive: bool = True

    def holds(self, bits: Sequence[bool]) -> bool:
        return bool(bits[self.var]) == self.positive


class Equation(NamedTuple):
    """x_i XOR x_j XOR x_k = b."""
    i: int
    j: int
    k: int
    b: int

    def holds(self, bits: Sequence[bool]) -> bool:
        return (int(bits[self.i]) ^ int(bits[self.j]) ^ int(bits[self.k])) == self.b


Clause = Tuple[Literal, ...]


class Assignment(BaseModel):
    """One truth value per variable."""
    model_config = ConfigDict(frozen=True)

    bits: Tuple[bool, ...]

    def __len__(self) -> int:
        return len(self.bits)

    def __getitem__(self, var: int) -> bool:
        return self.bits[var]

    @classmethod
    def of(cls, values: Sequence[Union[int, bool]]) -> "Assignment":
        return cls(bits=tuple(bool(v) for v in values))

    @classmethod
    def zeros(cls, var_count: int) -> "Assignment":
        return cls(bits=(False,) * var_count)


class CnfFormula(BaseModel):
    """Clause list over var_count variables."""
    model_config = ConfigDict(frozen=True)

    var_count: int = Field(ge=0)
    clauses: Tuple[Clause, ...] = ()

    @model_validator(mode="after")
    def _check_clauses(self):
        for index, clause in enumerate(self.clauses):
            if not clause:
                raise ValueError(f"clause {index} is empty")
            seen = set()
            for literal in clause:
                if literal.var < 0 or literal.var >= self.var_count:
                    raise ValueError(f"clause {index} uses variable {literal.var} outside 0..{self.var_count - 1}")
                if literal.var in seen:
                    raise ValueError(f"clause {index} uses variable {literal.var} twice")
                seen.add(literal.var)
        return self

    @property
    def m(self) -> int:
        return len(self.clauses)

    def is_3cnf(self) -> bool:
        return all(len(c) <= 3 for c in self.clauses)


class LinSystem(BaseModel):
    """Equations x_i + x_j + x_k = b over GF(2)."""
    model_config = ConfigDict(frozen=True)

    var_count: int = Field(ge=0)
    equations: Tuple[Equation, ...] = ()

    @model_validator(mode="after")
    def _check_equations(self):
        for index, eq in enumerate(self.equations):
            variables = (eq.i, eq.j, eq.k)
            if len(set(variables)) != 3:
                raise ValueError(f"equation {index} repeats a variable")
            if any(v < 0 or v >= self.var_count for v in variables):
                raise ValueError(f"equation {index} uses a variable outside 0..{self.var_count - 1}")
            if eq.b not in (0, 1):
                raise ValueError(f"equation {index} has right-hand side {eq.b}")
        return self

    @property
    def m(self) -> int:
        return len(self.equations)


def build_formula(var_count: int, clauses) -> CnfFormula:
    """Construct a CnfFormula from (var, positive) pairs, surfacing failures as InstanceException."""
    try:
        return CnfFormula(
            var_count=var_count,
            clauses=tuple(tuple(Literal(*lit) for lit in clause) for clause in clauses),
        )
    except ValidationError as e:
        raise InstanceException(f"Invalid formula: {e.errors()[0]['msg']}") from e


def build_system(var_count: int, equations) -> LinSystem:
    try:
        return LinSystem(var_count=var_count, equations=tuple(Equation(*eq) for eq in equations))
    except ValidationError as e:
        raise InstanceException(f"Invalid linear system: {e.errors()[0]['msg']}") from e


def clause_satisfied(clause: Clause, bits: Sequence[bool]) -> bool:
    return any(literal.holds(bits) for literal in clause)


def count_satisfied(instance: Union[CnfFormula, LinSystem], assignment: Assignment) -> int:
    """Number of clauses (or equations) satisfied under the assignment."""
    if len(assignment) != instance.var_count:
        raise InstanceException(
            f"Assignment has {len(assignment)} bits but the instance has {instance.var_count} variables"
        )
    bits = assignment.bits
    if isinstance(instance, LinSystem):
        return sum(1 for eq in instance.equations if eq.holds(bits))
    return sum(1 for clause in instance.clauses if clause_satisfied(clause, bits))
