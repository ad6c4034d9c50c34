"""scikit-learn style front ends: AR(1) noise fitting, SSA projection spectra
and the MC-SSA detector."""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_random_state, check_series, check_window
from .bases import FrequencyRange, eigen_basis
from .detection import MAX_CORRECTION, TestConfig, run_mcssa
from .noise import Ar1Model, estimate_ar1, generate_ar1
from .ssa import decompose, embed, squared_projection_norms


def _as_model(noise_model, n):
    if noise_model is None or noise_model == "estimate":
        return None
    if isinstance(noise_model, Ar1Model):
        return noise_model.with_length(n)
    varphi, delta = noise_model
    return Ar1Model(varphi, delta, n)


class AR1Noise(BaseEstimator):
    """Zero-mean AR(1) red-noise model fitted by exact maximum likelihood.

    Attributes
    ----------
    varphi_ : float
        AR coefficient, clamped to 0 when not significant.
    delta_ : float
        Innovation standard deviation.
    model_ : Ar1Model
    """

    def fit(self, X, y=None):
        self.model_ = estimate_ar1(X)
        self.varphi_ = self.model_.varphi
        self.delta_ = self.model_.delta
        self.n_samples_fit_ = self.model_.n
        return self

    def sample(self, n_samples=None, random_state=None):
        check_is_fitted(self)
        n = self.n_samples_fit_ if n_samples is None else n_samples
        return generate_ar1(self.model_.with_length(n), check_random_state(random_state))

    def spectral_density(self, freq):
        check_is_fitted(self)
        return self.model_.spectral_density(freq)


class SSA(TransformerMixin, BaseEstimator):
    """Basic SSA decomposition of one series.

    ``fit`` stores the eigenvectors of the lag-covariance matrix and their
    ESPRIT frequencies; ``transform`` returns the squared norms of the
    projections of a series' lagged vectors onto those eigenvectors.  Rows of
    a 2-D input are treated as separate series.

    Parameters
    ----------
    window : int, default=20
        Window length L.
    """

    def __init__(self, window=20):
        self.window = window

    def fit(self, X, y=None):
        x = check_series(X)
        check_window(self.window, x.shape[0])
        dec = decompose(embed(x, self.window))
        self.eigenvalues_ = dec.eigenvalues
        self.eigenvectors_ = dec.eigenvectors
        self.frequencies_ = eigen_basis(x, self.window).frequencies
        return self

    def transform(self, X):
        check_is_fitted(self)
        arr = np.asarray(X, dtype=float)
        if arr.ndim == 1:
            return squared_projection_norms(embed(arr, self.window), self.eigenvectors_)
        return np.vstack([squared_projection_norms(embed(row, self.window), self.eigenvectors_)
                          for row in arr])


class MonteCarloSSA(BaseEstimator):
    """Monte Carlo SSA detector of oscillations in red noise.

    ``fit`` runs the max-statistic multiple test on one series and keeps the
    full :class:`~mcssa.detection.TestResult` in ``result_``.

    Parameters
    ----------
    window : int, default=20
    n_surrogates : int, default=1000
    confidence : float, default=0.8
        Confidence level; the significance level is ``1 - confidence``.
    basis : {"ev", "sin"}, default="ev"
    freq_range : tuple of float, default=(0.0, 0.5)
    two_tailed : bool, default=False
    noise_model : None, "estimate", (varphi, delta) or Ar1Model, default=None
        Null model of the surrogates; None estimates it from the series.
    correction : {"max", "bonferroni"}, default="max"
    random_state : int, Generator or None
    n_jobs : int, default=1
        Threads used to draw surrogates; results do not depend on it.
    """

    def __init__(self, window=20, n_surrogates=1000, confidence=0.8, basis="ev",
                 freq_range=(0.0, 0.5), two_tailed=False, noise_model=None,
                 correction=MAX_CORRECTION, random_state=None, n_jobs=1):
        self.window = window
        self.n_surrogates = n_surrogates
        self.confidence = confidence
        self.basis = basis
        self.freq_range = freq_range
        self.two_tailed = two_tailed
        self.noise_model = noise_model
        self.correction = correction
        self.random_state = random_state
        self.n_jobs = n_jobs

    def _config(self, n):
        return TestConfig(
            window=self.window, n_surrogates=self.n_surrogates, confidence=self.confidence,
            two_tailed=self.two_tailed, freq_range=FrequencyRange(*self.freq_range),
            basis=self.basis, null_model=_as_model(self.noise_model, n),
            correction=self.correction,
        )

    def fit(self, X, y=None):
        x = check_series(X)
        config = self._config(x.shape[0])
        self.result_ = run_mcssa(x, config, check_random_state(self.random_state), self.n_jobs)
        self.reject_ = self.result_.reject
        self.freq_max_ = self.result_.freq_max
        self.noise_model_ = self.result_.null_model
        self.frequencies_ = self.result_.frequencies
        self.upper_ = self.result_.upper
        self.lower_ = self.result_.lower
        return self

    def significant_frequencies(self):
        check_is_fitted(self)
        return self.result_.frequencies[self.result_.significant]
