"""Input validation helpers shared by the public functions and estimators."""

import numbers

import numpy as np

from .exceptions import DataError, ParameterError


def check_series(x, *, min_length=2, name="series"):
    """Return ``x`` as a 1-D float64 array of finite values.

    A column vector of shape (n, 1) is accepted and flattened, so that
    estimators can be fed the usual 2-D ``X``.
    """
    arr = np.asarray(x, dtype=float)
    if arr.ndim == 2 and arr.shape[1] == 1:
        arr = arr[:, 0]
    if arr.ndim != 1:
        raise DataError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if arr.shape[0] < min_length:
        raise DataError(f"{name} must have at least {min_length} values, got {arr.shape[0]}")
    if not np.all(np.isfinite(arr)):
        raise DataError(f"{name} contains non-finite values")
    return arr


def check_window(window, n):
    if not isinstance(window, numbers.Integral) or isinstance(window, bool):
        raise ParameterError(f"window length must be an integer, got {window!r}")
    if not 1 < window < n:
        raise ParameterError(f"window length must satisfy 1 < L < N={n}, got L={window}")
    return int(window)


def check_level(level, name="confidence"):
    if not 0.0 < float(level) < 1.0:
        raise ParameterError(f"{name} level must lie in (0, 1), got {level}")
    return float(level)


def check_count(value, minimum, name):
    if not isinstance(value, numbers.Integral) or isinstance(value, bool) or value < minimum:
        raise ParameterError(f"{name} must be an integer >= {minimum}, got {value!r}")
    return int(value)


def check_random_state(seed):
    """Turn ``seed`` into a :class:`numpy.random.Generator`.

    Generators are passed through untouched so that callers control the stream.
    Every generator returned here is backed by a SeedSequence, which is what
    makes per-replicate substreams (``Generator.spawn``) possible.
    """
    if isinstance(seed, np.random.Generator):
        return seed
    if isinstance(seed, np.random.SeedSequence):
        return np.random.default_rng(seed)
    if seed is None or isinstance(seed, numbers.Integral):
        return np.random.default_rng(seed)
    raise ParameterError(f"{seed!r} cannot be used to seed a numpy Generator")


def check_workers(workers):
    if workers is None:
        return 1
    return check_count(workers, 1, "workers")
