"""Projection vectors W_1..W_H with frequency labels, and frequency-range selection."""

from dataclasses import dataclass

import numpy as np

from ._validation import check_series, check_window
from .esprit import esprit_main_frequency
from .exceptions import ParameterError, RangeError
from .ssa import UNIT_NORM_TOL, decompose, embed

EIGENVECTOR = "eigenvector"
SINUSOID = "sinusoid"
BASIS_KINDS = (EIGENVECTOR, SINUSOID)


@dataclass(frozen=True)
class FrequencyRange:
    """Closed frequency interval ``[low, high]`` inside ``[0, 0.5]``."""

    low: float = 0.0
    high: float = 0.5

    def __post_init__(self):
        if not (0.0 <= self.low < self.high <= 0.5):
            raise ParameterError(
                f"frequency range must satisfy 0 <= low < high <= 0.5, got ({self.low}, {self.high})"
            )

    def __iter__(self):
        return iter((self.low, self.high))


FULL_RANGE = FrequencyRange(0.0, 0.5)


@dataclass(frozen=True)
class ProjectionBasis:
    """Unit projection vectors (columns of ``vectors``) and their frequencies."""

    vectors: np.ndarray
    frequencies: np.ndarray
    kind: str

    def __post_init__(self):
        if self.kind not in BASIS_KINDS:
            raise ParameterError(f"basis kind must be one of {BASIS_KINDS}, got {self.kind!r}")
        L, H = self.vectors.shape
        if self.frequencies.shape != (H,):
            raise ParameterError("one frequency per projection vector is required")
        if H > L:
            raise ParameterError(f"at most L={L} projection vectors are allowed, got {H}")
        if np.any(np.abs(np.linalg.norm(self.vectors, axis=0) - 1.0) > UNIT_NORM_TOL):
            raise ParameterError("projection vectors must have unit norm")
        if np.any((self.frequencies < 0.0) | (self.frequencies > 0.5)):
            raise ParameterError("frequencies must lie in [0, 0.5]")

    @property
    def window_length(self):
        return self.vectors.shape[0]

    @property
    def size(self):
        return self.vectors.shape[1]

    def subset(self, idx):
        return ProjectionBasis(self.vectors[:, idx], self.frequencies[idx], self.kind)


def sine_basis(window):
    """``L`` normalized sine vectors at frequencies ``k / (2L + 1)``, k = 1..L."""
    if isinstance(window, bool) or int(window) != window or window < 2:
        raise ParameterError(f"window length must be an integer >= 2, got {window!r}")
    L = int(window)
    k = np.arange(1, L + 1)
    freqs = k / (2 * L + 1)
    t = np.arange(1, L + 1)
    U = np.sin(2.0 * np.pi * np.outer(t, freqs))
    U /= np.linalg.norm(U, axis=0)
    return ProjectionBasis(U, freqs, SINUSOID)


def eigen_basis(ts, window):
    """Eigenvectors of the series' lag-covariance matrix, labelled by ESPRIT frequency."""
    x = check_series(ts)
    L = check_window(window, x.shape[0])
    dec = decompose(embed(x, L))
    U = dec.eigenvectors
    freqs = np.array([esprit_main_frequency(U[:, i]) for i in range(U.shape[1])])
    return ProjectionBasis(U, freqs, EIGENVECTOR)


def select_in_range(basis, freq_range):
    """Indices of vectors with ``low <= frequency <= high``.

    Raises
    ------
    RangeError
        When no frequency falls inside the range.
    """
    low, high = freq_range
    idx = np.flatnonzero((basis.frequencies >= low) & (basis.frequencies <= high))
    if idx.size == 0:
        raise RangeError("no projection vectors in the requested frequency range")
    return idx


def make_basis(kind, ts, window):
    """Build a basis by kind name; ``"ev"`` and ``"sin"`` are accepted as aliases."""
    kind = {"ev": EIGENVECTOR, "sin": SINUSOID}.get(kind, kind)
    if kind == EIGENVECTOR:
        return eigen_basis(ts, window)
    if kind == SINUSOID:
        return sine_basis(window)
    raise ParameterError(f"unknown basis kind {kind!r}")
