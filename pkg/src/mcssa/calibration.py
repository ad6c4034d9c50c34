"""Outer Monte Carlo over whole test runs: type-I error and power estimates
with exact binomial intervals, significance-level adjustment, ROC points."""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np
from scipy.stats import beta

from ._validation import check_count, check_level, check_random_state, check_workers
from .detection import BONFERRONI, TestConfig, decide, replicate_statistics, run_mcssa
from .exceptions import ParameterError, SearchFailure
from .noise import Ar1Model, SignalSpec, synthesize


@dataclass(frozen=True)
class Scenario:
    """Generating process (true noise plus optional sinusoid), test settings and
    number of outer replicates ``M``."""

    model: Ar1Model
    signal: SignalSpec
    config: TestConfig
    n_replicates: int = 1000

    def __post_init__(self):
        check_count(self.n_replicates, 1, "n_replicates")

    @property
    def is_null(self):
        return self.signal.amplitude == 0.0


@dataclass(frozen=True)
class ErrorEstimate:
    rejections: int
    n_replicates: int
    ci_low: float
    ci_high: float

    @property
    def proportion(self):
        return self.rejections / self.n_replicates

    def contains(self, value):
        return self.ci_low <= value <= self.ci_high


@dataclass(frozen=True)
class AlphaAdjustment:
    target: float
    adjusted: float
    estimate: ErrorEstimate
    trace: List[Tuple[float, float]] = field(default_factory=list)


def clopper_pearson(k, n, level=0.95):
    """Exact binomial confidence interval for ``k`` successes in ``n`` trials."""
    k = check_count(k, 0, "k")
    n = check_count(n, 1, "n")
    if k > n:
        raise ParameterError(f"successes {k} exceed trials {n}")
    tail = (1.0 - level) / 2.0
    low = 0.0 if k == 0 else float(beta.ppf(tail, k, n - k + 1))
    high = 1.0 if k == n else float(beta.ppf(1.0 - tail, k + 1, n - k))
    return low, high


def _estimate(k, n):
    low, high = clopper_pearson(k, n)
    return ErrorEstimate(int(k), int(n), low, high)


def _one_replicate(scenario, gen):
    series_rng, test_rng = gen.spawn(2)
    n = scenario.model.n
    x = synthesize(scenario.signal, n, scenario.model, series_rng)
    if scenario.config.correction == BONFERRONI:
        return run_mcssa(x, scenario.config, test_rng)
    return replicate_statistics(x, scenario.config, test_rng)


def _run_chunk(scenario, gens):
    return [_one_replicate(scenario, g) for g in gens]


@dataclass
class ReplicateStatistics:
    """Per-replicate level-free statistics of one scenario.

    Decisions at any confidence level are read off the cached statistics;
    this equals re-running every replicate with the same master seed at that
    level, because surrogates and observations do not depend on the level.
    """

    scenario: Scenario
    records: list

    def rejections(self, confidence=None, two_tailed=None):
        cfg = self.scenario.config
        confidence = cfg.confidence if confidence is None else check_level(confidence)
        two_tailed = cfg.two_tailed if two_tailed is None else two_tailed
        if cfg.correction == BONFERRONI:
            if confidence != cfg.confidence or two_tailed != cfg.two_tailed:
                raise ParameterError("Bonferroni runs are cached at their configured level only")
            return sum(r.reject for r in self.records)
        return sum(decide(z, hi, lo, confidence, two_tailed)[0] for z, hi, lo in self.records)

    def estimate(self, confidence=None, two_tailed=None):
        return _estimate(self.rejections(confidence, two_tailed), len(self.records))


def simulate(scenario, rng=None, workers=1):
    """Run all ``M`` replicates of ``scenario``.

    Replicate ``i`` uses substream ``rng.spawn(M)[i]`` and splits it into a
    series stream and a test stream, so results depend only on the master
    seed, never on ``workers``.
    """
    workers = check_workers(workers)
    gens = check_random_state(rng).spawn(scenario.n_replicates)
    if workers == 1:
        records = _run_chunk(scenario, gens)
    else:
        size = -(-len(gens) // (4 * workers))
        chunks = [gens[i:i + size] for i in range(0, len(gens), size)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = [r for part in pool.map(_run_chunk, [scenario] * len(chunks), chunks)
                       for r in part]
    return ReplicateStatistics(scenario, records)


def estimate_rejection_rate(scenario, rng=None, workers=1):
    """Proportion of replicates in which the null is rejected, with a 95% exact CI.

    Without a signal this estimates the type-I error, with one the power.
    Any replicate error aborts the whole estimate.
    """
    return simulate(scenario, rng, workers).estimate()


def adjust_alpha(scenario, target, rng=None, lo=0.01, hi=0.6, max_iter=30, tol=1e-4,
                 workers=1, statistics=None):
    """Find a nominal significance level whose type-I error estimate covers ``target``.

    The target itself is tried first; then the search bisects ``[lo, hi]``,
    relying on the type-I error being nondecreasing in the nominal level when
    all candidates share the same replicates.  The search stops as soon as
    the target lies inside a candidate's 95% interval.

    Raises
    ------
    SearchFailure
        The target is outside what ``[lo, hi]`` can reach, or the search
        exhausted ``max_iter`` / ``tol`` without covering it.
    """
    target = check_level(target, "target significance")
    if not scenario.is_null:
        raise ParameterError("alpha adjustment needs a scenario without signal")
    if not 0.0 < lo < hi < 1.0:
        raise ParameterError(f"search interval must satisfy 0 < lo < hi < 1, got [{lo}, {hi}]")
    stats = statistics if statistics is not None else simulate(scenario, rng, workers)
    trace = []

    def evaluate(alpha):
        est = stats.estimate(1.0 - alpha)
        trace.append((float(alpha), est.proportion))
        return est

    for alpha in (target, lo, hi):
        est = evaluate(alpha)
        if est.contains(target):
            return AlphaAdjustment(target, float(alpha), est, trace)
        if alpha == lo and est.ci_low > target:
            raise SearchFailure(f"type-I error at level {lo} already exceeds {target}", trace)
        if alpha == hi and est.ci_high < target:
            raise SearchFailure(f"type-I error at level {hi} stays below {target}", trace)

    a, b = lo, hi
    for _ in range(max_iter):
        mid = 0.5 * (a + b)
        est = evaluate(mid)
        if est.contains(target):
            return AlphaAdjustment(target, mid, est, trace)
        if est.proportion < target:
            a = mid
        else:
            b = mid
        if b - a < tol:
            break
    raise SearchFailure(f"no level in [{lo}, {hi}] brings the type-I error to {target}", trace)


def _copy_stream(seed_seq):
    return np.random.default_rng(
        np.random.SeedSequence(seed_seq.entropy, spawn_key=seed_seq.spawn_key,
                               pool_size=seed_seq.pool_size))


@dataclass(frozen=True)
class RocPoint:
    alpha: float
    fpr: ErrorEstimate
    tpr: ErrorEstimate


def roc_sweep(null_scenario, alt_scenario, levels, rng=None, workers=1):
    """False/true positive rates at each nominal significance level.

    Both scenarios are simulated once from the same master seed and every
    level is evaluated on those replicates, so the FPR and TPR columns are
    nondecreasing in the level.
    """
    levels = [check_level(a, "significance") for a in levels]
    seed = check_random_state(rng).spawn(1)[0].bit_generator.seed_seq
    null_stats = simulate(null_scenario, _copy_stream(seed), workers)
    alt_stats = simulate(alt_scenario, _copy_stream(seed), workers)
    return [RocPoint(a, null_stats.estimate(1.0 - a), alt_stats.estimate(1.0 - a))
            for a in sorted(levels)]
