import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from mcssa import AR1Noise, SSA, Ar1Model, MonteCarloSSA, SignalSpec, decompose, embed, synthesize


@pytest.fixture(scope="module")
def series():
    return synthesize(SignalSpec(0.5, 5.5), 600, Ar1Model(0.7, 1.0, 600), 12)


def test_get_params_and_clone():
    est = MonteCarloSSA(window=30, basis="sin", random_state=3)
    params = est.get_params()
    assert params["window"] == 30 and params["basis"] == "sin"
    twin = clone(est)
    assert twin.get_params() == params
    assert not hasattr(twin, "result_")


def test_set_params_roundtrip(series):
    est = MonteCarloSSA(n_surrogates=100, random_state=0).set_params(window=15)
    est.fit(series)
    assert est.result_.upper.shape[0] <= 15


def test_fit_matches_functional_api(series):
    from mcssa import TestConfig, run_mcssa

    est = MonteCarloSSA(window=20, n_surrogates=200, noise_model=(0.7, 1.0), random_state=9)
    est.fit(series)
    ref = run_mcssa(series, TestConfig(20, 200, null_model=Ar1Model(0.7, 1.0, 600)), 9)
    assert est.reject_ == ref.reject
    assert np.array_equal(est.upper_, ref.upper)
    assert est.freq_max_ == ref.freq_max


def test_column_vector_input(series):
    a = MonteCarloSSA(window=20, n_surrogates=100, random_state=1).fit(series)
    b = MonteCarloSSA(window=20, n_surrogates=100, random_state=1).fit(series[:, None])
    assert np.array_equal(a.result_.statistics, b.result_.statistics)


def test_significant_frequencies(series):
    est = MonteCarloSSA(window=20, n_surrogates=300, basis="sin", noise_model=(0.7, 1.0),
                        random_state=2).fit(series)
    sig = est.significant_frequencies()
    assert set(sig) <= set(est.frequencies_)


def test_not_fitted():
    with pytest.raises(NotFittedError):
        MonteCarloSSA().significant_frequencies()
    with pytest.raises(NotFittedError):
        AR1Noise().sample(10)


def test_ar1_noise(series):
    noise = AR1Noise().fit(series)
    assert 0 < noise.varphi_ < 1 and noise.delta_ > 0
    path = noise.sample(50, random_state=0)
    assert path.shape == (50,)
    assert np.array_equal(path, noise.sample(50, random_state=0))
    assert noise.spectral_density(0.0) > noise.spectral_density(0.5)


def test_ssa_transformer(series):
    ssa = SSA(window=20).fit(series)
    spectrum = ssa.transform(series)
    assert np.allclose(spectrum, decompose(embed(series, 20)).eigenvalues, rtol=1e-8)
    batch = ssa.fit_transform(series)
    assert batch.shape == (20,)
    two = ssa.transform(np.vstack([series, 2 * series]))
    assert np.allclose(two[1], 4 * two[0])
    assert ssa.frequencies_.shape == (20,)
