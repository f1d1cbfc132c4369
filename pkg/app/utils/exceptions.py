"""
Custom exceptions for the gap-amplification workbench.
"""


class GapBenchException(Exception):
    """Base exception for all workbench errors."""
    pass


class ConfigurationException(GapBenchException):
    """Invalid environment configuration."""
    pass


class InstanceException(GapBenchException):
    """Domain instance failed validation."""
    pass


class ParseException(InstanceException):
    """Text instance could not be parsed."""
    pass


class MalformedHeaderException(ParseException):
    """Missing or malformed `p ...` header."""
    pass


class MalformedLineException(ParseException):
    """Body line that does not match the format."""
    pass


class IndexOutOfRangeException(ParseException):
    """Vertex or variable index outside the declared range."""
    pass


class SelfLoopException(ParseException):
    """Edge joining a vertex to itself."""
    pass


class DuplicateEdgeException(ParseException):
    """Edge listed more than once."""
    pass


class RepeatedVariableException(ParseException):
    """Variable used twice in one clause or equation."""
    pass


class SpectralException(GapBenchException):
    """Eigenvalue computation errors."""
    pass


class ConvergenceException(SpectralException):
    """Power iteration did not reach a certified residual."""
    pass


class ExpanderException(GapBenchException):
    """Expander construction errors."""
    pass


class SizeCapException(GapBenchException):
    """Construction refused because it would exceed a configured cap."""
    pass


class ProductException(GapBenchException):
    """Derandomized product errors."""
    pass


class ParameterException(GapBenchException):
    """Invalid amplification parameters."""
    pass


class ReductionException(GapBenchException):
    """Reduction precondition failures."""
    pass


class WitnessException(GapBenchException):
    """Witness handed to a translator is infeasible."""
    pass


class OracleException(GapBenchException):
    """Exact solver errors."""
    pass


class BudgetExceededException(OracleException):
    """Enumeration or search budget exceeded."""
    pass


class InternalOracleException(OracleException):
    """Solver produced a witness that failed re-validation."""
    pass


class VerificationTimeoutException(GapBenchException):
    """Verification suite ran past its deadline."""

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial
