"""
Unit tests for seeds, generators, suites and the suite runner.
"""

import itertools
from fractions import Fraction
from unittest.mock import patch

import pytest

from app.config import get_settings
from app.expander.families import ExpanderSpec
from app.harness.generators import make_rng, planted_clique, random_3cnf, random_graph, triangle_free
from app.harness.runner import run_suite, run_trial
from app.harness.seeds import GOLDEN_GAMMA, derive_trial_seed, splitmix64
from app.harness.suites import SUITE_ALIASES, SUITES, Trial, resolve_suite
from app.oracles.clique import max_clique
from app.utils.exceptions import (
    ConfigurationException,
    GapBenchException,
    ReductionException,
    VerificationTimeoutException,
)


class TestSeeds:
    """Tests for per-trial seed derivation."""

    def test_splitmix_reference_value(self):
        """Test the first splitmix64 output from state 0."""
        assert splitmix64(GOLDEN_GAMMA) == 0xE220A8397B1DCDAF
        assert derive_trial_seed(0, 0) == 0xE220A8397B1DCDAF

    def test_seeds_are_distinct(self):
        seeds = {derive_trial_seed(42, i) for i in range(1000)}
        assert len(seeds) == 1000

    def test_seeds_fit_64_bits(self):
        assert all(0 <= derive_trial_seed(2 ** 64 - 1, i) < 2 ** 64 for i in range(10))


class TestGenerators:
    """Tests for the seeded instance generators."""

    def test_same_seed_same_graph(self):
        assert random_graph(10, 0.4, make_rng(7)) == random_graph(10, 0.4, make_rng(7))

    def test_planted_clique(self):
        g = planted_clique(10, 6, 0.1, make_rng(3))
        assert max_clique(g).value >= 6

    def test_triangle_free(self):
        g = triangle_free(10, 0.8, make_rng(5))
        assert max_clique(g).value <= 2

    def test_formula_is_3cnf(self):
        f = random_3cnf(5, 12, make_rng(1))
        assert f.m == 12
        assert f.is_3cnf()


class TestTrial:
    """Tests for the per-trial state."""

    def test_size_respects_max_n(self):
        trial = Trial(0, 1, max_n=4)
        assert all(3 <= trial.size(3, 12) <= 4 for _ in range(20))

    def test_observe_normalizes_numbers(self):
        trial = Trial(0, 1)
        trial.observe(ratio=Fraction(2, 4), x=0.1 + 0.2)
        assert trial.observed == {"ratio": "1/2", "x": 0.3}

    def test_expect_records_mismatch(self):
        trial = Trial(3, 1)
        trial.expect(False, "broken")
        assert trial.record().mismatches == ["trial 3: broken"]


class TestSuites:
    """Every suite passes on its first trials."""

    @pytest.mark.parametrize("suite", sorted(SUITES))
    def test_first_trial_passes(self, suite):
        record = run_trial(suite, 0, derive_trial_seed(0, 0))
        assert record.mismatches == []

    @pytest.mark.parametrize("suite", ["roundtrip", "cb", "minsat", "subexp-approx", "claim1"])
    def test_several_trials_pass(self, suite):
        report = run_suite(suite, 5, 11)
        assert report.passed

    def test_aliases_resolve_to_registered_names(self):
        """Test each alias names a registered suite and reports under it."""
        for alias, name in SUITE_ALIASES.items():
            assert name in SUITES
            assert resolve_suite(alias) == name
        assert resolve_suite("claim1") == "claim1"
        report = run_suite("grouping-bound", 1, 0)
        assert report.suite == "claim1"
        assert report.passed


class TestRunner:
    """Tests for run_suite and run_trial."""

    def test_report_is_deterministic(self):
        first = run_suite("roundtrip", 4, 9).model_dump()
        second = run_suite("roundtrip", 4, 9).model_dump()
        assert first == second
        assert all(t["elapsed"] is None for t in first["trials"])
        assert "elapsed_total" not in first["statistics"]

    def test_timings_are_opt_in(self):
        report = run_suite("roundtrip", 2, 9, timings=True)
        assert all(t.elapsed is not None for t in report.trials)
        assert "elapsed_total" in report.statistics

    def test_trial_seeds_follow_derivation(self):
        report = run_suite("subexp-approx", 3, 5)
        assert [t.seed for t in report.trials] == [derive_trial_seed(5, i) for i in range(3)]

    def test_unknown_suite(self):
        with pytest.raises(GapBenchException):
            run_suite("nope", 1, 0)

    def test_domain_error_becomes_mismatch(self):
        """Test an exception inside a suite is reported, not raised."""
        def broken(trial):
            raise ReductionException("gadget failed")

        with patch.dict("app.harness.runner.SUITES", {"broken": broken}):
            record = run_trial("broken", 2, 1)
        assert record.mismatches == ["trial 2: ReductionException: gadget failed"]

    def test_validation_error_becomes_mismatch(self):
        """Test a model validation failure inside a suite is reported, not raised."""
        def invalid(trial):
            ExpanderSpec(family="external", size=4)

        with patch.dict("app.harness.runner.SUITES", {"invalid": invalid}):
            record = run_trial("invalid", 0, 1)
        assert len(record.mismatches) == 1
        assert record.mismatches[0].startswith("trial 0: ValidationError")

    def test_timeout_returns_partial_report(self):
        """Test the deadline stops the run and the partial report survives."""
        clock = itertools.chain([0.0], itertools.repeat(100.0))
        with patch("app.harness.runner._now", side_effect=clock):
            with pytest.raises(VerificationTimeoutException) as info:
                run_suite("roundtrip", 3, 0, timeout=10)
        partial = info.value.partial
        assert partial.completed is False
        assert not partial.passed
        assert len(partial.trials) == 0

    def test_deadline_interrupts_single_worker(self):
        """Test one worker still stops at the deadline while a trial is running."""
        with pytest.raises(VerificationTimeoutException) as info:
            run_suite("theorem3-sandwich", 1, 0, timeout=1e-4, workers=1)
        assert info.value.partial.completed is False
        assert info.value.partial.suite == "theorem3-sandwich"

    def test_workers_do_not_change_report(self):
        sequential = run_suite("roundtrip", 3, 4, workers=1).model_dump()
        parallel = run_suite("roundtrip", 3, 4, workers=2).model_dump()
        assert sequential == parallel

    def test_max_n_recorded(self):
        report = run_suite("cb", 2, 0, max_n=3)
        assert report.config == {"max_n": 3, "timings": False}


class TestSettings:
    """Tests for environment configuration."""

    def test_env_override(self, monkeypatch):
        monkeypatch.setenv("GAPBENCH_WORKERS", "3")
        monkeypatch.setenv("GAPBENCH_PORT_CAP", "1_000")
        settings = get_settings()
        assert settings.workers == 3
        assert settings.port_cap == 1000

    def test_invalid_value(self, monkeypatch):
        monkeypatch.setenv("GAPBENCH_SUITE_TIMEOUT", "soon")
        with pytest.raises(ConfigurationException):
            get_settings()
