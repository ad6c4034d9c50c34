"""Exit criteria: reproduction of the published type-I error / power tables,
the demo behaviour, exact identities, the binomial interval and determinism.

Every check appends one PASS/FAIL line that is printed in the terminal summary.
The table reproductions run M = 1000 outer replicates and take several minutes.
"""

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from mcssa import (Ar1Model, FrequencyRange, Scenario, SignalSpec, TestConfig, clopper_pearson,
                   decompose, embed, esprit_main_frequency, multiple_test, run_mcssa, simulate,
                   sine_basis, squared_projection_norms, surrogate_projections, synthesize)
from mcssa.cli import main

SEED = 20261018
N, L, M = 1000, 20, 1000
TRUE = Ar1Model(0.7, 1.0, N)
FULL = FrequencyRange(0.0, 0.5)
NARROW = FrequencyRange(0.1, 0.3)

slow = pytest.mark.slow


def check(criterion, passed, detail):
    ACCEPTANCE_LINES.append(f"[{'PASS' if passed else 'FAIL'}] {criterion}: {detail}")
    print(ACCEPTANCE_LINES[-1])
    assert passed, detail


def fmt(est):
    return f"{est.proportion:.3f} ({est.ci_low:.3f}, {est.ci_high:.3f})"


def overlaps(est, low, high):
    return est.ci_low <= high and low <= est.ci_high


def scenario(amplitude=0.0, G=400, given=True, freq_range=FULL, two_tailed=False):
    config = TestConfig(window=L, n_surrogates=G, confidence=0.8, two_tailed=two_tailed,
                        freq_range=freq_range, basis="ev", null_model=TRUE if given else None)
    return Scenario(TRUE, SignalSpec(amplitude, 5.5), config, M)


_cache = {}


def stats(**kw):
    key = tuple(sorted(kw.items()))
    if key not in _cache:
        _cache[key] = simulate(scenario(**kw), SEED)
    return _cache[key]


@slow
def test_c1_type_one_error_true_model():
    est = stats().estimate()
    ok = abs(est.proportion - 0.209) <= 0.03 and overlaps(est, 0.184, 0.236)
    check("C1 type-I, model, G=400", ok, f"{fmt(est)} vs 0.209 (0.184, 0.236)")


@slow
def test_c2_undersized_g_is_liberal():
    est = stats(G=100).estimate()
    ok = est.proportion > 0.2 and est.ci_low > 0.2 and overlaps(est, 0.200, 0.253)
    check("C2 type-I, model, G=100", ok, f"{fmt(est)} vs 0.226 (0.200, 0.253); need CI above 0.2")


@slow
def test_c3_estimated_parameters_conservative():
    s = stats(given=False)
    at_nominal = s.estimate(0.8)
    adjusted = s.estimate(1 - 0.33)
    ok = overlaps(at_nominal, 0.085, 0.124) and overlaps(adjusted, 0.185, 0.237)
    check("C3 type-I, estimated, alpha=0.2 / 0.33", ok,
          f"{fmt(at_nominal)} vs 0.103 (0.085, 0.124); {fmt(adjusted)} vs 0.21 (0.185, 0.237)")


@slow
def test_c3_alpha_search():
    """Supplementary to C3: the bisection lands near the published adjusted level,
    and the [0.25, 0.3] search fails exactly when both endpoints stay below 0.2."""
    from mcssa import adjust_alpha
    from mcssa.exceptions import SearchFailure

    s = stats(given=False)
    sc = scenario(given=False)
    adj = adjust_alpha(sc, 0.2, statistics=s, lo=0.2, hi=0.5)
    hi_est = s.estimate(1 - 0.3)
    expect_failure = hi_est.ci_high < 0.2 and not s.estimate(1 - 0.2).contains(0.2)
    try:
        adjust_alpha(sc, 0.2, statistics=s, lo=0.25, hi=0.3)
        failed = False
    except SearchFailure:
        failed = True
    ok = 0.27 <= adj.adjusted <= 0.39 and adj.estimate.contains(0.2) and failed == expect_failure
    check("C3 (supplementary) alpha search", ok,
          f"adjusted level {adj.adjusted:.4f} with type-I {fmt(adj.estimate)}; "
          f"[0.25, 0.3] search failed={failed}, endpoint oracle at 0.3 {fmt(hi_est)}")


@slow
def test_c4_power():
    full = stats(amplitude=0.3).estimate()
    narrow = stats(amplitude=0.3, freq_range=NARROW).estimate()
    est = stats(amplitude=0.3, given=False)
    est20, est33 = est.estimate(0.8), est.estimate(1 - 0.33)
    ok = (abs(full.proportion - 0.719) <= 0.03 and abs(narrow.proportion - 0.814) <= 0.03
          and abs(est20.proportion - 0.533) <= 0.04 and abs(est33.proportion - 0.650) <= 0.04)
    check("C4 power", ok,
          f"model full {fmt(full)} vs 0.719; model (0.1, 0.3) {fmt(narrow)} vs 0.814; "
          f"est 0.2 {fmt(est20)} vs 0.533; est 0.33 {fmt(est33)} vs 0.650")


@slow
def test_c5_two_tailed():
    null = stats(G=1000).estimate(0.8, two_tailed=True)
    alt = stats(amplitude=0.3, G=1000)
    two, one = alt.estimate(0.8, two_tailed=True), alt.estimate(0.8, two_tailed=False)
    ok = (overlaps(null, 0.193, 0.245) and abs(two.proportion - 0.623) <= 0.03
          and two.proportion < one.proportion)
    check("C5 two-tailed, G=1000", ok,
          f"type-I {fmt(null)} vs 0.218 (0.193, 0.245); power {fmt(two)} vs 0.623; "
          f"one-tailed at matched seeds {fmt(one)}")


@slow
def test_c6_demo_configuration():
    runs = 100
    hits, grid_ok, sin_freqs = 0, True, []
    for i in range(runs):
        series_ss, test_ss = np.random.SeedSequence([SEED, i]).spawn(2)
        x = synthesize(SignalSpec(0.5, 5.5), N, TRUE, np.random.default_rng(series_ss))
        ev = run_mcssa(x, TestConfig(window=40, n_surrogates=1000, null_model=TRUE),
                       np.random.default_rng(test_ss))
        hits += ev.reject and abs(ev.freq_max - 1 / 5.5) <= 0.02
        sin = run_mcssa(x, TestConfig(window=40, n_surrogates=1000, basis="sin", null_model=TRUE),
                        np.random.default_rng(test_ss))
        if sin.reject:
            k = sin.freq_max * 81
            grid_ok &= abs(k - round(k)) < 1e-9
            sin_freqs.append(round(k))
    values, counts = np.unique(sin_freqs, return_counts=True)
    mode = int(values[np.argmax(counts)]) if len(values) else None
    ok = hits >= 90 and grid_ok and mode == 15
    check("C6 demo (A=0.5, L=40, G=1000)", ok,
          f"ev: {hits}/{runs} reject near 1/5.5; sin: {len(sin_freqs)} rejections, "
          f"all on k/81 grid={grid_ok}, modal k={mode}")


def test_c7_exact_identities():
    rng = np.random.default_rng(SEED)
    x = rng.standard_normal(300)
    X = embed(x, 25)
    failures = []
    i, j = np.meshgrid(np.arange(25), np.arange(276), indexing="ij")
    if not np.array_equal(X.entries, x[i + j]):
        failures.append("hankel")
    dec = decompose(X)
    if abs(dec.eigenvalues.sum() / np.sum(X.entries**2) - 1) > 1e-8:
        failures.append("energy")
    p = squared_projection_norms(X, dec.eigenvectors)
    if np.max(np.abs(p / dec.eigenvalues - 1)) > 1e-8:
        failures.append("projection=eigenvalue")
    t = np.arange(1, 41)
    for w in np.arange(0.05, 0.451, 0.05):
        if abs(esprit_main_frequency(np.sin(2 * np.pi * w * t)) - w) >= 1e-6:
            failures.append(f"esprit {w:.2f}")
    for Lw in (2, 10, 20, 40):
        if not np.array_equal(sine_basis(Lw).frequencies, np.arange(1, Lw + 1) / (2 * Lw + 1)):
            failures.append(f"sine grid L={Lw}")
    model = Ar1Model(0.7, 1.0, 300)
    W = sine_basis(20).vectors
    for seed in range(20):
        r = np.random.default_rng([SEED, seed])
        sample = surrogate_projections(model, W, 200, r)
        obs = squared_projection_norms(embed(synthesize(SignalSpec(0.4, 5.5), 300, model, r), 20), W)
        one = multiple_test(obs, sample, 0.8)
        two = multiple_test(obs, sample, 0.8, two_tailed=True)
        if one.reject != bool(np.any(obs > one.upper)):
            failures.append(f"post-hoc {seed}")
        if np.any(two.upper < one.upper):
            failures.append(f"two>=one {seed}")
    xs = synthesize(SignalSpec(0.4, 5.5), 400, model.with_length(400), 1)
    for c in (2.0, 0.25):
        a = run_mcssa(xs, TestConfig(20, 200, null_model=Ar1Model(0.7, 1.0, 400)), 3)
        b = run_mcssa(c * xs, TestConfig(20, 200, null_model=Ar1Model(0.7, c, 400)), 3)
        if not (a.reject == b.reject and a.q_upper == b.q_upper
                and np.array_equal(a.statistics, b.statistics)):
            failures.append(f"scale c={c}")
    check("C7 exact identities", not failures, "all exact" if not failures else ", ".join(failures))


def test_c8_clopper_pearson():
    low, high = clopper_pearson(23, 100)
    zero = clopper_pearson(0, 10)
    full = clopper_pearson(10, 10)
    ok = (round(low, 4) == 0.1517 and round(high, 4) == 0.3249 and zero[0] == 0.0
          and abs(zero[1] - (1 - 0.025**0.1)) < 1e-12 and full[1] == 1.0
          and abs(full[0] - 0.025**0.1) < 1e-12)
    check("C8 Clopper-Pearson", ok, f"(23, 100) -> ({low:.7f}, {high:.7f}); k=0 {zero}; k=M {full}")


def test_c9_determinism(tmp_path, capsys):
    small = ["--length", "300", "--window", "10", "--surrogates", "80", "--seed", "7"]
    commands = {
        "detect": ["detect", "--amplitude", "0.5", "--model", "0.7,1"] + small,
        "calibrate": ["calibrate", "-M", "8"] + small,
        "power": ["power", "--amplitude", "0.5", "-M", "8"] + small,
        "adjust-alpha": ["adjust-alpha", "-M", "8", "--lo", "0.05", "--hi", "0.95"] + small,
        "roc": ["roc", "--amplitude", "0.5", "-M", "8", "--levels", "0.1,0.3"] + small,
    }
    mismatched = []
    for name, argv in commands.items():
        outputs = []
        for workers in ("1", "3"):
            out = tmp_path / f"{name}-{workers}"
            main(argv + ["--workers", workers, "--out", str(out)])
            outputs.append({p.name: p.read_bytes() for p in sorted(out.iterdir())
                            if p.name != "manifest.json"})
        if outputs[0] != outputs[1] or not outputs[0]:
            mismatched.append(name)
    capsys.readouterr()
    check("C9 determinism across worker counts", not mismatched,
          "byte-identical" if not mismatched else f"differs: {mismatched}")
