import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mcssa import esprit_main_frequency
from mcssa.exceptions import ParameterError

k = np.arange(1, 41)


def test_pure_sinusoid():
    assert esprit_main_frequency(np.sin(2 * np.pi * 0.125 * k)) == pytest.approx(0.125, abs=1e-6)


def test_damped_sinusoid_matches_characteristic_root():
    # x_k = r^k sin(2 pi w k) satisfies x_{k+1} = 2 r cos(2 pi w) x_k - r^2 x_{k-1};
    # the roots of z^2 - 2 r cos(2 pi w) z + r^2 have argument 2 pi w
    r, w = 0.9, 0.2
    root = np.roots([1.0, -2 * r * np.cos(2 * np.pi * w), r**2])[0]
    expected = abs(np.angle(root)) / (2 * np.pi)
    assert esprit_main_frequency(r**k * np.sin(2 * np.pi * w * k)) == pytest.approx(expected, abs=1e-4)


@pytest.mark.parametrize("w", np.round(np.arange(0.05, 0.451, 0.05), 2))
def test_sinusoid_grid(w):
    assert abs(esprit_main_frequency(np.sin(2 * np.pi * w * k + 0.3)) - w) < 1e-6


def test_constant_is_zero_frequency():
    assert esprit_main_frequency(np.full(20, 3.0)) == 0.0


def test_alternating_is_half():
    assert esprit_main_frequency((-1.0) ** k * 0.95**k + 0.01 * 0.5**k) == 0.5


def test_exponential_trend_is_zero():
    assert esprit_main_frequency(1.05**k + 0.3 * 0.8**k) == 0.0


def test_too_short():
    with pytest.raises(ParameterError):
        esprit_main_frequency([1.0, 2.0, 3.0])


@settings(max_examples=50, deadline=None)
@given(v=st.lists(st.floats(-100, 100), min_size=6, max_size=40),
       c=st.floats(0.01, 100).flatmap(lambda a: st.sampled_from([a, -a])))
def test_scale_invariance(v, c):
    v = np.array(v)
    if np.ptp(v) == 0:
        return
    assert esprit_main_frequency(c * v) == pytest.approx(esprit_main_frequency(v), abs=1e-8)


@settings(max_examples=50, deadline=None)
@given(w=st.floats(0.02, 0.48), phase=st.floats(0, 2 * np.pi), r=st.floats(0.9, 1.1),
       L=st.integers(8, 40))
def test_reversal_symmetry_on_rank_two_signals(w, phase, r, L):
    t = np.arange(1, L + 1)
    v = r**t * np.sin(2 * np.pi * w * t + phase)
    assert esprit_main_frequency(v[::-1]) == pytest.approx(esprit_main_frequency(v), abs=1e-8)
