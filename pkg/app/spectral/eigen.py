"""
Second-eigenvalue computation for regular multigraphs given by rotation maps.

Dense symmetric eigensolve up to the configured vertex limit; beyond it, power
iteration on M^2 restricted to the complement of the all-ones vector, with a
residual certificate and restarts from fresh random vectors.
"""

from fractions import Fraction
from typing import Optional, Union

import numpy as np
from tenacity import retry, retry_if_exception_type, stop_after_attempt

from app.config import get_settings
from app.expander.rotation import RotationGraph
from app.models.schemas import ExpanderVerdict, SpectralReport, stable_float
from app.utils.exceptions import ConvergenceException, SpectralException
from app.utils.logger import logger

PASS_TOLERANCE = 1e-6
DENSE_ACCURACY = 1e-9


def _check_input(h: RotationGraph) -> None:
    if h.n < 2:
        raise SpectralException(f"Second eigenvalue needs at least 2 vertices, got {h.n}")


def _dense_eigenvalues(h: RotationGraph):
    matrix = h.adjacency_matrix()
    if not np.allclose(matrix.sum(axis=1), h.d):
        raise SpectralException("Adjacency rows do not sum to d; graph is not regular")
    eigenvalues = np.linalg.eigvalsh(matrix)
    principal = float(eigenvalues[-1])
    if abs(principal - h.d) > max(DENSE_ACCURACY * h.d, 1e-9):
        raise SpectralException(f"Principal eigenvalue {principal} differs from degree {h.d}")
    lambda_hat = float(np.max(np.abs(eigenvalues[:-1])))
    return principal, lambda_hat


def _apply(h: RotationGraph, x: np.ndarray) -> np.ndarray:
    """Adjacency-vector product through the rotation table."""
    return x[h.vertex_table].sum(axis=1)


def _power_iteration(h: RotationGraph, seed: int, max_iter: int) -> float:
    rng = np.random.default_rng(seed)
    x = rng.normal(size=h.n)
    x -= x.mean()
    x /= np.linalg.norm(x)
    threshold = PASS_TOLERANCE * h.d * h.d
    for _ in range(max_iter):
        y = _apply(h, _apply(h, x))
        y -= y.mean()
        mu = float(x @ y)
        residual = float(np.linalg.norm(y - mu * x))
        if residual <= threshold:
            return float(np.sqrt(max(mu, 0.0)))
        norm = np.linalg.norm(y)
        if norm == 0.0:
            return 0.0
        x = y / norm
    raise ConvergenceException(f"Power iteration did not certify a residual <= {threshold} in {max_iter} steps")


def _certified_power_lambda(h: RotationGraph, max_iter: int = 20000) -> float:
    attempt = {"seed": 0}

    @retry(stop=stop_after_attempt(3), retry=retry_if_exception_type(ConvergenceException), reraise=True)
    def run() -> float:
        seed = attempt["seed"]
        attempt["seed"] += 1
        if seed:
            logger.warning(f"Power iteration restart {seed} on n={h.n}")
        return _power_iteration(h, seed, max_iter)

    return run()


def second_eigenvalue(h: RotationGraph, dense_limit: Optional[int] = None) -> SpectralReport:
    """Largest |lambda| among the non-principal adjacency eigenvalues of h."""
    _check_input(h)
    limit = dense_limit or get_settings().dense_eigen_limit
    if h.n <= limit:
        principal, lambda_hat = _dense_eigenvalues(h)
        method, tolerance = "dense", DENSE_ACCURACY * h.d
    else:
        lambda_hat = _certified_power_lambda(h)
        principal, method, tolerance = float(h.d), "power", PASS_TOLERANCE * h.d
    return SpectralReport(
        n=h.n,
        d=h.d,
        lambda_hat=stable_float(lambda_hat),
        alpha_observed=stable_float(lambda_hat / h.d),
        principal=stable_float(principal),
        tolerance=tolerance,
        method=method,
    )


def verify_expander(h: RotationGraph, alpha_claim: Union[Fraction, float],
                    dense_limit: Optional[int] = None) -> ExpanderVerdict:
    """Pass iff lambda_hat <= alpha_claim * d + 1e-6 * d."""
    report = second_eigenvalue(h, dense_limit=dense_limit)
    claim = float(alpha_claim)
    passed = report.lambda_hat <= claim * h.d + PASS_TOLERANCE * h.d
    logger.info(f"Expander check n={h.n} d={h.d}: lambda_hat={report.lambda_hat:.6f} "
                f"claim={claim:.6f} -> {'pass' if passed else 'fail'}")
    return ExpanderVerdict(passed=passed, alpha_claim=stable_float(claim), report=report)
