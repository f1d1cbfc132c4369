"""
Shared plumbing for the exact solvers.
"""

import time
from typing import Iterable, Optional

from app.config import get_settings
from app.models.schemas import SolveResult
from app.utils.exceptions import BudgetExceededException, InternalOracleException
from app.utils.logger import logger


class SearchCounter:
    """Counts explored nodes and enforces the enumeration budget."""

    def __init__(self, problem: str, budget: Optional[int] = None):
        self.problem = problem
        self.budget = budget or get_settings().enumeration_budget
        self.explored = 0
        self.started = time.perf_counter()

    def tick(self, amount: int = 1) -> None:
        self.explored += amount
        if self.explored > self.budget:
            logger.warning(f"{self.problem}: budget of {self.budget} nodes exhausted")
            raise BudgetExceededException(f"{self.problem} search exceeded {self.budget} nodes")

    def require(self, candidates: int) -> None:
        """Refuse up front when an enumeration would exceed the budget."""
        if candidates > self.budget:
            raise BudgetExceededException(
                f"{self.problem} would enumerate {candidates} candidates, budget is {self.budget}"
            )

    def result(self, value: Optional[int], witness: Iterable[int], valid: bool) -> SolveResult:
        if not valid:
            logger.error(f"{self.problem}: witness failed re-validation")
            raise InternalOracleException(f"{self.problem} produced an infeasible witness")
        return SolveResult(
            problem=self.problem,
            value=value,
            witness=tuple(witness),
            explored=self.explored,
            elapsed=time.perf_counter() - self.started,
        )
