"""Red-noise (AR(1)) model: simulation of the null and the alternative, and
maximum-likelihood estimation of the noise parameters."""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.signal import lfilter

from ._validation import check_random_state, check_series
from .exceptions import EstimationError, ParameterError

#: Largest AR coefficient an estimate may take; the null model needs phi < 1.
PHI_MAX = 1.0 - 1e-6
MIN_ESTIMATION_LENGTH = 10


@dataclass(frozen=True)
class Ar1Model:
    """Zero-mean stationary AR(1) process ``xi_n = phi * xi_{n-1} + delta * eps_n``.

    Attributes
    ----------
    varphi : float
        AR coefficient, ``0 <= varphi < 1``.
    delta : float
        Innovation standard deviation, ``> 0``.
    n : int
        Series length, ``>= 2``.
    """

    varphi: float
    delta: float
    n: int

    def __post_init__(self):
        if not (np.isfinite(self.varphi) and 0.0 <= self.varphi < 1.0):
            raise ParameterError(f"varphi must satisfy 0 <= varphi < 1, got {self.varphi}")
        if not (np.isfinite(self.delta) and self.delta > 0.0):
            raise ParameterError(f"delta must be positive, got {self.delta}")
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 2:
            raise ParameterError(f"n must be an integer >= 2, got {self.n}")
        object.__setattr__(self, "varphi", float(self.varphi))
        object.__setattr__(self, "delta", float(self.delta))
        object.__setattr__(self, "n", int(self.n))

    @property
    def stationary_variance(self):
        return self.delta**2 / (1.0 - self.varphi**2)

    def spectral_density(self, freq):
        """Power spectral density ``delta^2 / (1 - 2 phi cos(2 pi f) + phi^2)``."""
        freq = np.asarray(freq, dtype=float)
        phi = self.varphi
        return self.delta**2 / (1.0 - 2.0 * phi * np.cos(2.0 * np.pi * freq) + phi**2)

    def with_length(self, n):
        return Ar1Model(self.varphi, self.delta, n)


@dataclass(frozen=True)
class SignalSpec:
    """Sinusoid ``amplitude * sin(2 pi k / period + phase)``; amplitude 0 is the null."""

    amplitude: float = 0.0
    period: float = 5.5
    phase: float = 0.0

    def __post_init__(self):
        if not (np.isfinite(self.amplitude) and self.amplitude >= 0.0):
            raise ParameterError(f"amplitude must be >= 0, got {self.amplitude}")
        if not (np.isfinite(self.period) and self.period > 2.0):
            raise ParameterError(f"period must exceed 2 samples, got {self.period}")
        if not np.isfinite(self.phase):
            raise ParameterError(f"phase must be finite, got {self.phase}")

    @property
    def frequency(self):
        return 1.0 / self.period

    def evaluate(self, n):
        k = np.arange(1, n + 1)
        return self.amplitude * np.sin(2.0 * np.pi * k / self.period + self.phase)


def _filter_innovations(eps, model):
    """Turn standard-normal draws (last axis = time) into stationary AR(1) paths."""
    e = eps * model.delta
    e[..., 0] = eps[..., 0] * np.sqrt(model.stationary_variance)
    return lfilter([1.0], [1.0, -model.varphi], e, axis=-1)


def generate_ar1(model, rng=None):
    """Draw one stationary red-noise path of length ``model.n``.

    The first value comes from the stationary law N(0, delta^2 / (1 - phi^2)),
    so no burn-in is needed.
    """
    if not isinstance(model, Ar1Model):
        raise ParameterError("model must be an Ar1Model")
    rng = check_random_state(rng)
    return _filter_innovations(rng.standard_normal(model.n), model)


def generate_ar1_batch(model, rngs):
    """One path per generator in ``rngs``, stacked into a (len(rngs), n) array."""
    eps = np.empty((len(rngs), model.n))
    for i, g in enumerate(rngs):
        eps[i] = g.standard_normal(model.n)
    return _filter_innovations(eps, model)


def synthesize(signal, n, model, rng=None):
    """Sinusoid plus red noise: ``A sin(2 pi k / T + phase) + xi_k`` for k = 1..n."""
    if n != model.n:
        raise ParameterError(f"length {n} does not match model length {model.n}")
    return signal.evaluate(n) + generate_ar1(model, rng)


def _ar1_sums(x):
    a = float(x @ x)
    b = float(x[1:] @ x[:-1])
    c = float(x[1:-1] @ x[1:-1])
    return a, b, c


def estimate_ar1(ts):
    """Fit a zero-mean AR(1) to ``ts`` by exact maximum likelihood.

    Estimates with an asymptotic standard error ``sqrt((1 - phi^2) / N)``
    larger than ``|phi|`` are set to 0 (white noise), negative estimates
    are set to 0 as well, and the result is capped at ``PHI_MAX``.  The
    innovation scale is the ML estimate at the unclamped coefficient.

    Raises
    ------
    DataError
        Fewer than 10 values, or non-finite values.
    EstimationError
        Constant input.
    """
    x = check_series(ts, min_length=MIN_ESTIMATION_LENGTH)
    n = x.shape[0]
    if np.ptp(x) == 0.0:
        raise EstimationError("cannot estimate AR(1) parameters of a constant series")
    a, b, c = _ar1_sums(x)

    def nll(phi):
        ssq = a - 2.0 * phi * b + phi * phi * c
        return 0.5 * n * np.log(ssq / n) - 0.5 * np.log1p(-phi * phi)

    opt = minimize_scalar(nll, bounds=(-PHI_MAX, PHI_MAX), method="bounded",
                          options={"xatol": 1e-10})
    if not np.isfinite(opt.x):
        raise EstimationError("likelihood maximization failed")
    phi_hat = float(opt.x)
    sigma2 = (a - 2.0 * phi_hat * b + phi_hat**2 * c) / n
    if not sigma2 > 0.0:
        raise EstimationError("estimated innovation variance is not positive")

    phi = phi_hat
    if np.sqrt((1.0 - phi_hat**2) / n) > abs(phi_hat):
        phi = 0.0
    phi = min(max(phi, 0.0), PHI_MAX)
    return Ar1Model(phi, float(np.sqrt(sigma2)), n)
