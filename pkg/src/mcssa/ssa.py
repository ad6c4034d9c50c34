"""Decomposition stage of basic SSA: Hankel embedding, eigendecomposition of
the lag-covariance matrix and squared projection norms of lagged vectors."""

from dataclasses import dataclass

import numpy as np

from ._validation import check_series, check_window
from .exceptions import ComputationError, DataError, ParameterError

#: Eigenvalues below this fraction of the leading one count as zero.
RANK_TOL = 1e-12
UNIT_NORM_TOL = 1e-8


@dataclass(frozen=True)
class TrajectoryMatrix:
    """L x K Hankel matrix whose columns are the lagged vectors of a series."""

    entries: np.ndarray

    @property
    def window_length(self):
        return self.entries.shape[0]

    @property
    def k(self):
        return self.entries.shape[1]

    @property
    def series_length(self):
        return self.window_length + self.k - 1


@dataclass(frozen=True)
class SsaDecomposition:
    """Eigenpairs of ``X X^T`` sorted by decreasing eigenvalue."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def rank(self):
        return self.eigenvalues.shape[0]


def embed(ts, window):
    """Build the trajectory matrix ``X[i, j] = x[i + j]`` (0-based) of shape L x K."""
    x = check_series(ts)
    L = check_window(window, x.shape[0])
    K = x.shape[0] - L + 1
    return TrajectoryMatrix(np.lib.stride_tricks.sliding_window_view(x, K).copy())


def decompose(X):
    """Eigendecomposition of ``X X^T``.

    Only strictly positive eigenvalues (relative to ``RANK_TOL * lambda_1``)
    are kept, so the result has ``d <= min(L, K)`` pairs.
    """
    entries = X.entries if isinstance(X, TrajectoryMatrix) else np.asarray(X, dtype=float)
    if not np.all(np.isfinite(entries)):
        raise DataError("trajectory matrix contains non-finite values")
    try:
        lam, U = np.linalg.eigh(entries @ entries.T)
    except np.linalg.LinAlgError as exc:
        raise ComputationError(f"eigendecomposition failed: {exc}") from exc
    order = np.argsort(lam)[::-1]
    lam, U = lam[order], U[:, order]
    d = min(entries.shape)
    if lam.size == 0 or lam[0] <= 0.0:
        keep = np.zeros(lam.shape, dtype=bool)
    else:
        keep = lam > RANK_TOL * lam[0]
    keep[d:] = False
    return SsaDecomposition(lam[keep], U[:, keep])


def _check_unit_columns(W, L):
    W = np.asarray(W, dtype=float)
    if W.ndim == 1:
        W = W[:, None]
    if W.ndim != 2 or W.shape[0] != L:
        raise ParameterError(f"projection vectors must have {L} rows, got shape {W.shape}")
    norms = np.linalg.norm(W, axis=0)
    if np.any(np.abs(norms - 1.0) > UNIT_NORM_TOL):
        raise ParameterError("projection vectors must have unit Euclidean norm")
    return W


def squared_projection_norms(X, W):
    """``||X^T W_k||^2`` for every column ``W_k`` of ``W``."""
    entries = X.entries if isinstance(X, TrajectoryMatrix) else np.asarray(X, dtype=float)
    W = _check_unit_columns(W, entries.shape[0])
    return np.square(entries.T @ W).sum(axis=0)


def lag_covariance(paths, window):
    """``X X^T`` for every row of ``paths`` at once, shape (G, L, L).

    Entry ``(i, i + d)`` is the lag-``d`` product sum over K terms starting
    at ``i``.  Row 0 is a batched dot product; later rows follow by adding
    the product entering the window and removing the one leaving it.
    """
    Y = np.atleast_2d(np.asarray(paths, dtype=float))
    G, N = Y.shape
    L = window
    K = N - L + 1
    windows = np.lib.stride_tricks.sliding_window_view
    first = np.matmul(Y[:, None, :K], windows(Y, L, axis=1)[:, :K, :])[:, 0, :]
    padded = np.concatenate([Y, np.zeros((G, L))], axis=1)
    leaving = Y[:, : L - 1, None] * windows(padded[:, : 2 * L - 2], L, axis=1)
    entering = Y[:, K : K + L - 1, None] * windows(padded[:, K : K + 2 * L - 2], L, axis=1)
    by_lag = np.empty((G, L, L))
    by_lag[:, 0, :] = first
    np.cumsum(entering - leaving, axis=1, out=by_lag[:, 1:, :])
    by_lag[:, 1:, :] += first[:, None, :]
    # by_lag[g, i, d] is valid for i + d < L
    i, d = np.nonzero(np.add.outer(np.arange(L), np.arange(L)) < L)
    C = np.empty((G, L, L))
    C[:, i, i + d] = by_lag[:, i, d]
    C[:, i + d, i] = by_lag[:, i, d]
    return C


def quadratic_form_weights(W):
    """Matrix ``Q`` with ``Q[i * L + j, k] = W[i, k] W[j, k]`` so that
    ``C.reshape(G, L * L) @ Q`` gives ``W_k^T C_g W_k``."""
    W = np.asarray(W, dtype=float)
    L, H = W.shape
    return (W[:, None, :] * W[None, :, :]).reshape(L * L, H)


def batch_squared_projection_norms(paths, W):
    """``||Xi_g^T W_k||^2`` for each row ``g`` of ``paths``; returns (G, H)."""
    Y = np.atleast_2d(np.asarray(paths, dtype=float))
    W = _check_unit_columns(W, np.asarray(W).shape[0])
    L = W.shape[0]
    C = lag_covariance(Y, L)
    return C.reshape(Y.shape[0], L * L) @ quadratic_form_weights(W)
