"""
Unit tests for second-eigenvalue computation and expander verification.
"""

from fractions import Fraction
from unittest.mock import patch

import numpy as np
import pytest

from app.expander.families import build_complete, build_gabber_galil
from app.expander.rotation import RotationGraph
from app.spectral.eigen import _power_iteration, second_eigenvalue, verify_expander
from app.utils.exceptions import ConvergenceException, SpectralException


def four_cycle() -> RotationGraph:
    """C_4 with port 0 stepping forward and port 1 stepping back."""
    vertices = np.array([[(v + 1) % 4, (v - 1) % 4] for v in range(4)])
    ports = np.array([[1, 0] for _ in range(4)])
    return RotationGraph(4, 2, vertices, ports)


class TestSecondEigenvalue:
    """Tests for second_eigenvalue."""

    def test_complete_graph(self):
        """Test K_5 has lambda_hat = 1."""
        report = second_eigenvalue(build_complete(5))
        assert report.lambda_hat == pytest.approx(1.0)
        assert report.alpha_observed == pytest.approx(0.25)
        assert report.principal == pytest.approx(4.0)
        assert report.method == "dense"

    def test_bipartite_cycle(self):
        """Test C_4 carries the eigenvalue -d."""
        report = second_eigenvalue(four_cycle())
        assert report.lambda_hat == pytest.approx(2.0)
        assert report.alpha_observed == pytest.approx(1.0)

    def test_gg_k3(self):
        assert second_eigenvalue(build_gabber_galil(3)).lambda_hat <= 7.0710678 + 1e-6

    def test_single_vertex_rejected(self):
        h = RotationGraph(1, 1, np.array([[0]]), np.array([[0]]))
        with pytest.raises(SpectralException):
            second_eigenvalue(h)

    def test_power_iteration_agrees_with_dense(self):
        """Test the sparse path on a graph above the dense limit setting."""
        h = build_complete(12)
        dense = second_eigenvalue(h).lambda_hat
        sparse = second_eigenvalue(h, dense_limit=10)
        assert sparse.method == "power"
        assert sparse.lambda_hat == pytest.approx(dense, abs=1e-6 * h.d)

    def test_power_iteration_retries(self):
        """Test a non-converging attempt is retried with a fresh seed."""
        h = build_complete(6)
        calls = []

        def flaky(graph, seed, max_iter):
            calls.append(seed)
            if seed == 0:
                raise ConvergenceException("no certificate")
            return 1.0

        with patch("app.spectral.eigen._power_iteration", side_effect=flaky):
            report = second_eigenvalue(h, dense_limit=2)
        assert calls == [0, 1]
        assert report.lambda_hat == 1.0

    def test_power_iteration_gives_up(self):
        with patch("app.spectral.eigen._power_iteration",
                   side_effect=ConvergenceException("no certificate")):
            with pytest.raises(ConvergenceException):
                second_eigenvalue(build_complete(6), dense_limit=2)

    def test_power_iteration_on_complete(self):
        assert _power_iteration(build_complete(8), 0, 5000) == pytest.approx(1.0, abs=1e-3)


class TestVerifyExpander:
    """Tests for verify_expander."""

    def test_complete_passes_exact_claim(self):
        """Test K_14 with claim 1/13."""
        verdict = verify_expander(build_complete(14), Fraction(1, 13))
        assert verdict.passed

    def test_cycle_fails(self):
        """Test C_4 against claim 0.9."""
        verdict = verify_expander(four_cycle(), 0.9)
        assert not verdict.passed
        assert verdict.report.lambda_hat == pytest.approx(2.0)

    @pytest.mark.parametrize("k", [2, 5, 12])
    def test_gg_claim(self, k):
        assert verify_expander(build_gabber_galil(k), 5 * np.sqrt(2) / 8).passed


class TestRelabelInvariance:
    """Tests for second_eigenvalue under vertex relabelling."""

    @pytest.mark.parametrize("seed", range(5))
    def test_relabel_is_isomorphism(self, seed):
        """Test relabel permutes the adjacency matrix and keeps lambda_hat."""
        h = build_gabber_galil(4)
        perm = np.random.default_rng(seed).permutation(h.n)
        relabelled = h.relabel(perm)
        assert np.array_equal(relabelled.adjacency_matrix()[np.ix_(perm, perm)], h.adjacency_matrix())
        expected = second_eigenvalue(h).lambda_hat
        assert second_eigenvalue(relabelled).lambda_hat == pytest.approx(expected, abs=1e-6 * h.d)

    def test_relabel_on_power_iteration_path(self):
        h = build_complete(12)
        perm = np.random.default_rng(3).permutation(h.n)
        expected = second_eigenvalue(h, dense_limit=10).lambda_hat
        assert second_eigenvalue(h.relabel(perm), dense_limit=10).lambda_hat == pytest.approx(expected, abs=1e-6 * h.d)
