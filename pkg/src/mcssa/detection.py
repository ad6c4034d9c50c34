"""Monte Carlo SSA test: surrogate projection distributions, single prediction
intervals and the max-statistic multiple test with family-wise error control."""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from ._validation import (check_count, check_level, check_random_state, check_series,
                          check_window, check_workers)
from .bases import BASIS_KINDS, EIGENVECTOR, FULL_RANGE, FrequencyRange, make_basis, select_in_range
from .exceptions import DegenerateSurrogateError, ParameterError, SampleSizeError
from .noise import Ar1Model, estimate_ar1, generate_ar1_batch
from .ssa import batch_squared_projection_norms, embed, squared_projection_norms

#: Surrogates are processed in blocks of this size whatever the worker count,
#: so that the arithmetic (and therefore every bit of the output) is fixed.
SURROGATE_BLOCK = 64
MAX_CORRECTION = "max"
BONFERRONI = "bonferroni"


def quantile(values, level):
    """Empirical quantile, linear interpolation at plotting positions (i - 1) / (n - 1)."""
    return float(np.quantile(values, level, method="linear"))


@dataclass(frozen=True)
class SurrogateSample:
    """Squared projection norms of G surrogates onto H vectors, ``p[k, i]``."""

    p: np.ndarray
    mu: np.ndarray = field(init=False)
    sigma: np.ndarray = field(init=False)

    def __post_init__(self):
        p = np.asarray(self.p, dtype=float)
        if p.ndim != 2 or p.shape[1] < 2:
            raise ParameterError(f"surrogate matrix must be H x G with G >= 2, got shape {p.shape}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "mu", p.mean(axis=1))
        object.__setattr__(self, "sigma", p.std(axis=1, ddof=1))

    @property
    def n_vectors(self):
        return self.p.shape[0]

    @property
    def n_surrogates(self):
        return self.p.shape[1]

    def standardize(self, values):
        """``(values - mu) / sigma`` row-wise; ``values`` is (H,) or (H, G)."""
        if np.any(self.sigma <= 0.0):
            bad = np.flatnonzero(self.sigma <= 0.0).tolist()
            raise DegenerateSurrogateError(
                f"surrogate projections have zero spread for vectors {bad}; "
                "increase the number of surrogates or check the basis"
            )
        values = np.asarray(values, dtype=float)
        if values.ndim == 1:
            return (values - self.mu) / self.sigma
        return (values - self.mu[:, None]) / self.sigma[:, None]


@dataclass(frozen=True)
class TestConfig:
    """Settings of one MC-SSA run.

    ``null_model=None`` means the AR(1) parameters are estimated from the
    tested series; otherwise the given model generates the surrogates.
    """

    __test__ = False

    window: int
    n_surrogates: int = 1000
    confidence: float = 0.8
    two_tailed: bool = False
    freq_range: FrequencyRange = FULL_RANGE
    basis: str = EIGENVECTOR
    null_model: Optional[Ar1Model] = None
    correction: str = MAX_CORRECTION

    def __post_init__(self):
        check_count(self.window, 2, "window")
        check_count(self.n_surrogates, 2, "n_surrogates")
        check_level(self.confidence)
        if not isinstance(self.freq_range, FrequencyRange):
            object.__setattr__(self, "freq_range", FrequencyRange(*self.freq_range))
        basis = {"ev": EIGENVECTOR, "sin": "sinusoid"}.get(self.basis, self.basis)
        if basis not in BASIS_KINDS:
            raise ParameterError(f"basis must be one of {BASIS_KINDS}, got {self.basis!r}")
        object.__setattr__(self, "basis", basis)
        if self.correction not in (MAX_CORRECTION, BONFERRONI):
            raise ParameterError(f"unknown correction {self.correction!r}")

    @property
    def alpha(self):
        return 1.0 - self.confidence


@dataclass(frozen=True)
class TestResult:
    """Decision and corrected prediction intervals of one test.

    Arrays ``observed``, ``frequencies``, ``lower``, ``upper``, ``statistics``
    and ``significant`` refer to the included vectors (positions ``included``
    in the full basis); ``all_observed`` and ``all_frequencies`` cover the
    whole basis.
    """

    __test__ = False

    reject: bool
    freq_max: Optional[float]
    q_upper: Optional[float]
    q_lower: Optional[float]
    observed: np.ndarray
    frequencies: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    statistics: np.ndarray
    significant: np.ndarray
    mu: np.ndarray
    sigma: np.ndarray
    confidence: float
    two_tailed: bool
    included: np.ndarray
    all_observed: np.ndarray
    all_frequencies: np.ndarray
    null_model: Optional[Ar1Model] = None
    basis: Optional[str] = None

    @property
    def alpha(self):
        return 1.0 - self.confidence


def surrogate_projections(model, W, n_surrogates, rng=None, workers=1):
    """Project ``n_surrogates`` red-noise paths onto the columns of ``W``.

    Surrogate ``i`` is drawn from its own substream ``rng.spawn(G)[i]``, so the
    sample does not depend on ``workers``.
    """
    G = check_count(n_surrogates, 2, "n_surrogates")
    workers = check_workers(workers)
    rng = check_random_state(rng)
    W = np.asarray(W, dtype=float)
    if W.ndim == 1:
        W = W[:, None]
    check_window(W.shape[0], model.n)
    streams = rng.spawn(G)
    blocks = [streams[i:i + SURROGATE_BLOCK] for i in range(0, G, SURROGATE_BLOCK)]

    def run(block):
        return batch_squared_projection_norms(generate_ar1_batch(model, block), W)

    if workers == 1 or len(blocks) == 1:
        parts = [run(b) for b in blocks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, blocks))
    return SurrogateSample(np.concatenate(parts, axis=0).T)


def single_interval(row, confidence, two_tailed=False):
    """Prediction interval from one row of surrogate statistics.

    One-tailed: ``[0, gamma-quantile]``; two-tailed: between the
    ``(1 - gamma)/2`` and ``(1 + gamma)/2`` quantiles.
    """
    row = np.asarray(row, dtype=float)
    if row.ndim != 1 or row.shape[0] < 2:
        raise ParameterError("a prediction interval needs at least 2 surrogate values")
    gamma = check_level(confidence)
    if two_tailed:
        return quantile(row, (1.0 - gamma) / 2.0), quantile(row, (1.0 + gamma) / 2.0)
    return 0.0, quantile(row, gamma)


def max_statistics(observed, sample):
    """Standardized observed statistics and per-surrogate max/min over vectors.

    Returns ``(z, eta_max, eta_min)`` with shapes (H,), (G,), (G,).  These are
    all a level-dependent decision needs (see :func:`decide`).
    """
    observed = np.asarray(observed, dtype=float)
    if observed.shape != (sample.n_vectors,):
        raise ParameterError(
            f"{observed.shape[0] if observed.ndim else 0} observed values for "
            f"{sample.n_vectors} surrogate rows"
        )
    Z = sample.standardize(sample.p)
    return sample.standardize(observed), Z.max(axis=0), Z.min(axis=0)


def thresholds(eta_max, eta_min, confidence, two_tailed=False):
    """``(q_upper, q_lower)``; ``q_lower`` is None for the one-tailed test."""
    if two_tailed:
        return quantile(eta_max, (1.0 + confidence) / 2.0), quantile(eta_min, (1.0 - confidence) / 2.0)
    return quantile(eta_max, confidence), None


def decide(z, eta_max, eta_min, confidence, two_tailed=False):
    """Reject when a standardized observation escapes ``(q_lower, q_upper)``.

    Returns ``(reject, significant, q_upper, q_lower)``.
    """
    q_upper, q_lower = thresholds(eta_max, eta_min, confidence, two_tailed)
    significant = z > q_upper
    if two_tailed:
        significant |= z < q_lower
    return bool(significant.any()), significant, q_upper, q_lower


def _result(observed, frequencies, sample, reject, significant, q_upper, q_lower,
            lower, upper, z, confidence, two_tailed):
    observed = np.asarray(observed, dtype=float)
    if frequencies is None:
        frequencies = np.full(observed.shape, np.nan)
    frequencies = np.asarray(frequencies, dtype=float)
    freq_max = float(frequencies[np.argmax(z)]) if reject else None
    included = np.arange(observed.shape[0])
    return TestResult(
        reject=reject, freq_max=freq_max, q_upper=q_upper, q_lower=q_lower,
        observed=observed, frequencies=frequencies, lower=lower, upper=upper,
        statistics=z, significant=significant, mu=sample.mu, sigma=sample.sigma,
        confidence=confidence, two_tailed=bool(two_tailed), included=included,
        all_observed=observed, all_frequencies=frequencies,
    )


def multiple_test(observed, sample, confidence, two_tailed=False, frequencies=None):
    """Max-statistic ("prediction half-cube") test over all vectors of ``sample``.

    The threshold ``q`` is the empirical ``gamma``-quantile of the per-surrogate
    maxima of standardized projections (``(1 + gamma)/2`` in the two-tailed
    form, paired with the ``(1 - gamma)/2``-quantile of the minima).  The
    corrected interval of vector k is ``[mu_k + q_lower sigma_k, mu_k + q sigma_k]``,
    with lower bound 0 in the one-tailed form.
    """
    gamma = check_level(confidence)
    z, eta_max, eta_min = max_statistics(observed, sample)
    reject, significant, q_upper, q_lower = decide(z, eta_max, eta_min, gamma, two_tailed)
    upper = sample.mu + q_upper * sample.sigma
    if two_tailed:
        lower = sample.mu + q_lower * sample.sigma
    else:
        lower = np.zeros_like(upper)
    return _result(observed, frequencies, sample, reject, significant, q_upper, q_lower,
                   lower, upper, z, gamma, two_tailed)


def bonferroni_test(observed, sample, confidence, two_tailed=False, frequencies=None):
    """Single tests per vector at significance ``alpha / H``.

    Raises
    ------
    SampleSizeError
        When ``G < H / alpha``: the per-test quantile would lie beyond the
        last order statistic.
    """
    gamma = check_level(confidence)
    H, G = sample.n_vectors, sample.n_surrogates
    alpha = (1.0 - gamma) / H
    if G * alpha < 1.0 - 1e-9:
        raise SampleSizeError(
            f"Bonferroni correction over {H} vectors at alpha={1.0 - gamma:g} "
            f"needs at least {int(np.ceil(H / (1.0 - gamma)))} surrogates, got {G}"
        )
    z, _, _ = max_statistics(observed, sample)
    bounds = np.array([single_interval(row, 1.0 - alpha, two_tailed) for row in sample.p])
    lower, upper = bounds[:, 0], bounds[:, 1]
    observed = np.asarray(observed, dtype=float)
    significant = observed > upper
    if two_tailed:
        significant |= observed < lower
    return _result(observed, frequencies, sample, bool(significant.any()), significant,
                   None, None, lower, upper, z, gamma, two_tailed)


@dataclass(frozen=True)
class _Prepared:
    observed: np.ndarray
    frequencies: np.ndarray
    included: np.ndarray
    sample: SurrogateSample
    null_model: Ar1Model


def _prepare(series, config, rng, workers):
    x = check_series(series)
    check_window(config.window, x.shape[0])
    if config.null_model is None:
        model = estimate_ar1(x)
    else:
        model = config.null_model.with_length(x.shape[0])
    basis = make_basis(config.basis, x, config.window)
    idx = select_in_range(basis, config.freq_range)
    observed = squared_projection_norms(embed(x, config.window), basis.vectors)
    sample = surrogate_projections(model, basis.vectors[:, idx], config.n_surrogates,
                                   rng, workers)
    return _Prepared(observed, basis.frequencies, idx, sample, model)


def run_mcssa(series, config, rng=None, workers=1):
    """Full MC-SSA on one series: null model, basis, range selection,
    surrogates, multiple test.  One surrogate sample serves both the decision
    and the post-hoc intervals."""
    if not isinstance(config, TestConfig):
        raise ParameterError("config must be a TestConfig")
    rng = check_random_state(rng)
    prep = _prepare(series, config, rng, workers)
    test = bonferroni_test if config.correction == BONFERRONI else multiple_test
    res = test(prep.observed[prep.included], prep.sample, config.confidence,
               config.two_tailed, prep.frequencies[prep.included])
    return replace(res, included=prep.included, all_observed=prep.observed,
                   all_frequencies=prep.frequencies, null_model=prep.null_model,
                   basis=config.basis)


def replicate_statistics(series, config, rng=None, workers=1):
    """Level-free summary of one run, ``(z, eta_max, eta_min)``.

    Feeding it to :func:`decide` reproduces the decision of :func:`run_mcssa`
    with the same generator at any confidence level and either tail.
    """
    rng = check_random_state(rng)
    prep = _prepare(series, config, rng, workers)
    return max_statistics(prep.observed[prep.included], prep.sample)
