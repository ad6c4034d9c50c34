"""Main-frequency estimation of a short vector by rank-2 ESPRIT."""

import numpy as np

from .exceptions import ParameterError

_RANK_TOL = 1e-12
_REAL_TOL = 1e-12
_NULL_TOL = 1e-6
_TIE_TOL = 1e-8


def _shift_matrix(v):
    """Least-squares shift matrix of the 2-D leading subspace of ``v``'s
    inner trajectory matrix, or None when that subspace has rank < 2."""
    L = v.shape[0]
    inner = (L + 1) // 2
    X = np.lib.stride_tricks.sliding_window_view(v, L - inner + 1)
    U, s, _ = np.linalg.svd(X, full_matrices=False)
    if s.shape[0] < 2 or s[0] == 0.0 or s[1] <= _RANK_TOL * s[0]:
        return None
    U2 = U[:, :2]
    A, *_ = np.linalg.lstsq(U2[:-1], U2[1:], rcond=None)
    return A


def esprit_main_frequency(v):
    """Frequency (cycles per sample, in [0, 0.5]) of the dominant oscillation in ``v``.

    ``v`` is embedded with an inner window ``(len(v) + 1) // 2``; the shift
    invariance of the two leading left singular vectors gives a 2 x 2 matrix
    whose eigenvalues carry the frequency as their argument.

    A pair of real eigenvalues means no oscillation: the result is 0.5 when a
    negative root dominates in modulus (alternating component) and 0 otherwise.
    Vectors whose inner trajectory matrix has rank < 2 (constants, for one)
    or whose shift matrix is numerically nilpotent get frequency 0.
    """
    v = np.asarray(v, dtype=float).ravel()
    if v.shape[0] < 4:
        raise ParameterError(f"ESPRIT needs at least 4 values, got {v.shape[0]}")
    if not np.all(np.isfinite(v)):
        raise ParameterError("ESPRIT input contains non-finite values")
    A = _shift_matrix(v)
    if A is None:
        return 0.0
    # A acts on orthonormal coordinates, so its eigenvalues are scale-free
    mu = np.linalg.eigvals(A)
    if np.abs(mu).max() < _NULL_TOL:
        return 0.0
    if np.abs(mu.imag).max() > _REAL_TOL:
        freq = abs(np.angle(mu[0])) / (2.0 * np.pi)
    else:
        # Real roots of (nearly) equal modulus and opposite sign carry no
        # preferred frequency; resolve the tie towards 0 so that rounding
        # noise cannot flip the label.
        r = mu.real
        order = np.argsort(np.abs(r))
        big, small = r[order[-1]], r[order[0]]
        tie = abs(abs(big) - abs(small)) <= _TIE_TOL * abs(big)
        freq = 0.5 if (big < 0.0 and not tie) else 0.0
    return float(np.clip(freq, 0.0, 0.5))
