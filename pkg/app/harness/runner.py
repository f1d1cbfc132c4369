"""
Runs a named verification suite over seeded trials and assembles the report.
"""

import time
from multiprocessing import Pool
from multiprocessing import TimeoutError as PoolTimeout
from typing import Dict, List, Optional

from app.config import get_settings
from app.harness.seeds import derive_trial_seed
from app.harness.suites import SUITES, Trial, resolve_suite
from app.models.schemas import TrialRecord, VerificationReport, stable_float
from app.utils.exceptions import GapBenchException, VerificationTimeoutException
from app.utils.logger import logger


def run_trial(suite: str, index: int, seed: int, max_n: Optional[int] = None) -> TrialRecord:
    """One trial; a domain error inside a suite counts as a mismatch, not a crash."""
    started = time.perf_counter()
    trial = Trial(index, seed, max_n)
    try:
        SUITES[suite](trial)
    except (GapBenchException, ValueError) as e:
        # ValueError covers pydantic validation failures inside a suite
        logger.error(f"{suite} trial {index} raised {type(e).__name__}: {e}")
        trial.mismatches.append(f"trial {index}: {type(e).__name__}: {e}")
    record = trial.record()
    record.elapsed = time.perf_counter() - started
    logger.debug(f"{suite} trial {index}: {len(record.mismatches)} mismatches")
    return record


def _now() -> float:
    return time.monotonic()


def _run_trial_args(args) -> TrialRecord:
    return run_trial(*args)


def _statistics(records: List[TrialRecord], timings: bool) -> Dict[str, object]:
    stats: Dict[str, object] = {"trials_completed": len(records)}
    numeric: Dict[str, List[float]] = {}
    for record in records:
        for key, value in record.observed.items():
            if isinstance(value, (int, float)) and not isinstance(value, bool):
                numeric.setdefault(key, []).append(value)
    for key in sorted(numeric):
        values = numeric[key]
        stats[key] = {"min": min(values), "max": max(values)}
    if timings:
        elapsed = [r.elapsed or 0.0 for r in records]
        stats["elapsed_total"] = stable_float(sum(elapsed))
        stats["elapsed_max"] = stable_float(max(elapsed, default=0.0))
    return stats


def _report(suite: str, seed: int, trials: int, config: dict, records: List[TrialRecord],
            timings: bool, completed: bool) -> VerificationReport:
    records = sorted(records, key=lambda r: r.index)
    if not timings:
        records = [r.model_copy(update={"elapsed": None}) for r in records]
    mismatches = [m for r in records for m in r.mismatches]
    return VerificationReport(
        suite=suite,
        master_seed=seed,
        trial_count=trials,
        config=config,
        trials=records,
        mismatches=mismatches,
        statistics=_statistics(records, timings),
        completed=completed,
    )


def run_suite(suite: str, trials: int, seed: int, max_n: Optional[int] = None,
              timeout: Optional[float] = None, workers: Optional[int] = None,
              timings: bool = False) -> VerificationReport:
    """Run `trials` seeded trials; the report is independent of worker scheduling.

    Raises VerificationTimeoutException carrying the partial report when the
    deadline passes.
    """
    suite = resolve_suite(suite)
    if suite not in SUITES:
        raise GapBenchException(f"Unknown suite {suite!r}; choose from {', '.join(sorted(SUITES))}")
    settings = get_settings()
    timeout = timeout or settings.suite_timeout
    workers = workers or settings.workers
    config = {"max_n": max_n, "timings": timings}
    jobs = [(suite, i, derive_trial_seed(seed, i), max_n) for i in range(trials)]
    deadline = _now() + timeout
    records: List[TrialRecord] = []

    logger.info(f"Suite {suite}: {trials} trials, seed {seed}, workers {workers}")
    # Even workers=1 uses a pool: terminate() stops a trial that runs past the deadline.
    with Pool(processes=max(1, workers)) as pool:
        pending = [pool.apply_async(_run_trial_args, (job,)) for job in jobs]
        for result in pending:
            remaining = deadline - _now()
            if remaining <= 0:
                break
            try:
                records.append(result.get(timeout=remaining))
            except PoolTimeout:
                break
        pool.terminate()

    if len(records) < trials:
        partial = _report(suite, seed, trials, config, records, timings, completed=False)
        logger.warning(f"Suite {suite} timed out after {len(records)} of {trials} trials")
        raise VerificationTimeoutException(f"Suite {suite} exceeded {timeout}s", partial=partial)

    report = _report(suite, seed, trials, config, records, timings, completed=True)
    logger.info(f"Suite {suite} finished: {len(report.mismatches)} mismatches")
    return report
