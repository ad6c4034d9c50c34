import numpy as np
import pytest

from mcssa import FrequencyRange, decompose, eigen_basis, embed, select_in_range, sine_basis
from mcssa.bases import ProjectionBasis, make_basis
from mcssa.exceptions import ParameterError, RangeError


def test_sine_basis_l40():
    b = sine_basis(40)
    assert b.size == 40
    assert b.frequencies[0] == pytest.approx(1 / 81)
    assert b.frequencies[-1] == pytest.approx(40 / 81)
    assert np.array_equal(b.frequencies, np.arange(1, 41) / 81)
    assert b.frequencies.max() < 0.5


def test_sine_basis_l2():
    b = sine_basis(2)
    assert np.allclose(b.frequencies, [0.2, 0.4])
    expected = np.sin(2 * np.pi * np.outer([1, 2], [0.2, 0.4]))
    expected /= np.linalg.norm(expected, axis=0)
    assert np.allclose(b.vectors, expected)


def test_sine_basis_near_orthogonal():
    W = sine_basis(40).vectors
    gram = W.T @ W
    assert np.allclose(np.diag(gram), 1.0, atol=1e-12)
    assert np.abs(gram - np.diag(np.diag(gram))).max() < 0.05


@pytest.mark.parametrize("L", [2, 5, 20, 40])
def test_sine_basis_invariants(L):
    b = sine_basis(L)
    assert np.allclose(np.linalg.norm(b.vectors, axis=0), 1.0, atol=1e-8)
    assert np.all(np.diff(b.frequencies) > 0)
    assert np.array_equal(b.frequencies, np.arange(1, L + 1) / (2 * L + 1))


def test_select_in_range_enumeration():
    b = sine_basis(40)
    expected = [k - 1 for k in range(1, 41) if 0.1 <= k / 81 <= 0.3]
    idx = select_in_range(b, FrequencyRange(0.1, 0.3))
    assert idx.tolist() == expected
    assert (idx + 1).tolist() == list(range(9, 25))


def test_select_full_range_is_identity():
    b = sine_basis(17)
    assert select_in_range(b, FrequencyRange(0.0, 0.5)).tolist() == list(range(17))


def test_select_empty_range():
    with pytest.raises(RangeError, match="no projection vectors in the requested frequency range"):
        select_in_range(sine_basis(10), FrequencyRange(0.49, 0.499))


@pytest.mark.parametrize("lo,hi", [(0.3, 0.1), (-0.1, 0.2), (0.1, 0.6), (0.2, 0.2)])
def test_range_domain(lo, hi):
    with pytest.raises(ParameterError):
        FrequencyRange(lo, hi)


def test_eigen_basis_sinusoid_labels():
    t = np.arange(1, 201)
    b = eigen_basis(np.sin(2 * np.pi * 0.15 * t), 20)
    assert b.frequencies[0] == pytest.approx(0.15, abs=1e-4)
    assert b.frequencies[1] == pytest.approx(0.15, abs=1e-4)


def test_eigen_basis_shape_and_identity(rng):
    x = rng.standard_normal(1000)
    b = eigen_basis(x, 20)
    assert b.size == 20
    assert np.abs(b.vectors.T @ b.vectors - np.eye(20)).max() < 1e-8
    X = embed(x, 20)
    from mcssa import squared_projection_norms
    assert np.allclose(squared_projection_norms(X, b.vectors), decompose(X).eigenvalues, rtol=1e-8)
    assert np.all((b.frequencies >= 0) & (b.frequencies <= 0.5))


def test_basis_rejects_too_many_vectors():
    with pytest.raises(ParameterError):
        ProjectionBasis(np.ones((2, 3)) / np.sqrt(2), np.full(3, 0.1), "sinusoid")


def test_make_basis_aliases(rng):
    x = rng.standard_normal(50)
    assert make_basis("sin", x, 10).kind == "sinusoid"
    assert make_basis("ev", x, 10).kind == "eigenvector"
    with pytest.raises(ParameterError):
        make_basis("wavelet", x, 10)
