"""
Pydantic models for reports and certificates.
Everything here is serialized into the CLI's JSON output.
"""

from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

ARTIFACT_VERSION = "1.0.0"


def rational_str(value: Fraction) -> str:
    """Exact rational as `p/q` (or `p` for integers)."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def stable_float(value: float) -> float:
    """Round to 12 significant digits so reports are byte-stable."""
    return float(f"{value:.12g}")


class SpectralReport(BaseModel):
    """Second eigenvalue of a regular multigraph."""
    model_config = ConfigDict(frozen=True)

    n: int
    d: int
    lambda_hat: float
    alpha_observed: float
    principal: float
    tolerance: float
    method: str


class ExpanderVerdict(BaseModel):
    """Outcome of checking a claimed expansion."""
    passed: bool
    alpha_claim: float
    report: SpectralReport


class SolveResult(BaseModel):
    """Optimal value with a re-validated witness."""
    model_config = ConfigDict(frozen=True)

    problem: str
    value: Optional[int]
    witness: Tuple[int, ...] = ()
    explored: int = 0
    elapsed: float = 0.0

    @property
    def found(self) -> bool:
        return self.value is not None


class WalkRecord(BaseModel):
    """One vertex of a derandomized product."""
    id: int
    start: int
    ports: List[int]
    visited: List[int]


class TrialRecord(BaseModel):
    """Outcome of one seeded trial in a verification suite."""
    index: int
    seed: int
    digests: Dict[str, str] = Field(default_factory=dict)
    observed: Dict[str, Any] = Field(default_factory=dict)
    mismatches: List[str] = Field(default_factory=list)
    elapsed: Optional[float] = None


class VerificationReport(BaseModel):
    """Deterministic summary of a verification suite run."""
    suite: str
    master_seed: int
    trial_count: int
    config: Dict[str, Any]
    trials: List[TrialRecord]
    mismatches: List[str]
    statistics: Dict[str, Any]
    completed: bool = True
    artifact_version: str = ARTIFACT_VERSION

    @property
    def passed(self) -> bool:
        return self.completed and not self.mismatches


class AmplifyCertificate(BaseModel):
    """What the amplification pipeline guarantees for its output graph."""
    a: str
    b: str
    ratio: str
    epsilon: str
    alpha: str
    t: int
    family: str
    input_vertices: int
    blowup: int
    member_vertices: int
    degree: int
    output_vertices: int
    a_r: str
    b_r: str
    b_r_over_a_r: str
    size_constant: str
    check: Optional[Dict[str, Any]] = None
