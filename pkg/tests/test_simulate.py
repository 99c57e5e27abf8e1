import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from survwalk.model import IncrementDistribution, WalkSpec, WeightFunction
from survwalk.rng import RngStreamConfig
from survwalk.simulate import (SurvivalEstimate, enumerate_exact, exit_histogram, simulate_survival,
                               survival_curve)

DISTS = ["gaussian", "rademacher", "laplace", "uniform"]


def spec(dist="gaussian", weight=None, barrier=0.0, horizon=1):
    return WalkSpec(weight or WeightFunction.constant(), IncrementDistribution(dist), barrier, horizon)


def within(est, target, k=3.0):
    return abs(est.p_hat - target) <= k * est.std_err


def test_rademacher_doubling_weights():
    est = simulate_survival(spec("rademacher", WeightFunction.exponential(math.log(2)), horizon=10),
                            10**6, RngStreamConfig(7, 4))
    assert within(est, 2.0**-10)


def test_gaussian_one_step_half():
    est = simulate_survival(spec(horizon=1), 10**5, RngStreamConfig(1))
    assert within(est, 0.5)


def test_gaussian_three_steps_orthant():
    est = simulate_survival(spec(horizon=3), 10**7, RngStreamConfig(3, 8))
    assert within(est, 0.3125)


def test_curve_pair_and_triple():
    est = survival_curve(spec(horizon=3), [2, 3], 10**6, RngStreamConfig(9, 4))
    assert within(est[0], 0.375) and within(est[1], 0.3125)


def test_estimate_fields():
    e = SurvivalEstimate.from_counts(25, 100, 4, 3)
    assert e.p_hat == 0.25
    assert e.std_err == pytest.approx(math.sqrt(0.25 * 0.75 / 100))


def test_enumerate_examples():
    assert enumerate_exact(spec("rademacher", WeightFunction.exponential(math.log(2)), horizon=3)) == 1 / 8
    assert enumerate_exact(spec("rademacher", horizon=1)) == 0.5
    assert enumerate_exact(spec("rademacher", horizon=2)) == 0.5


def test_enumerate_rejects_continuous_and_long():
    with pytest.raises(ValueError):
        enumerate_exact(spec("gaussian", horizon=3))
    with pytest.raises(ValueError):
        enumerate_exact(spec("rademacher", horizon=26))


def test_enumerate_constant_matches_ballot_count():
    # simple walk staying <= 0 for N steps: C(N, floor(N/2)) / 2^N
    for n in range(1, 21):
        assert enumerate_exact(spec("rademacher", horizon=n)) == pytest.approx(math.comb(n, n // 2) / 2**n, rel=1e-12)


weights = st.one_of(
    st.floats(0.0, 2.0).map(lambda p: WeightFunction.polynomial(p) if p > 0 else WeightFunction.constant()),
    st.floats(0.05, 1.5).map(WeightFunction.exponential),
)


@given(w=weights, n=st.integers(1, 12), barrier=st.sampled_from([0.0, 0.5, 2.0]))
def test_enumerate_agrees_with_mc(w, n, barrier):
    s = spec("rademacher", w, barrier, n)
    est = simulate_survival(s, 40_000, RngStreamConfig(1618, 2))
    p = enumerate_exact(s)
    assert abs(est.p_hat - p) <= 4 * max(est.std_err, math.sqrt(p * (1 - p) / est.paths)) + 1e-12


@given(dist=st.sampled_from(DISTS), seed=st.integers(0, 2**64 - 1), streams=st.integers(1, 9),
       w=weights, n=st.integers(1, 40))
def test_determinism_and_worker_invariance(dist, seed, streams, w, n):
    s = spec(dist, w, 0.0, n)
    rng = RngStreamConfig(seed, streams)
    a = exit_histogram(s, n, 3000, rng, workers=1)
    b = exit_histogram(s, n, 3000, rng, workers=3)
    c = exit_histogram(s, n, 3000, RngStreamConfig(seed, streams), workers=1)
    assert np.array_equal(a, b) and np.array_equal(a, c)


@given(dist=st.sampled_from(DISTS), seed=st.integers(0, 2**32), w=weights,
       barrier=st.sampled_from([0.0, 1.0]), n=st.integers(1, 50))
def test_early_exit_sound(dist, seed, w, barrier, n):
    s = spec(dist, w, barrier, n)
    rng = RngStreamConfig(seed, 3)
    a = exit_histogram(s, n, 2000, rng, early_exit=True)
    b = exit_histogram(s, n, 2000, rng, early_exit=False)
    assert np.array_equal(a, b)


@given(dist=st.sampled_from(DISTS), seed=st.integers(0, 2**32), w=weights)
def test_curve_monotone(dist, seed, w):
    est = survival_curve(spec(dist, w, 0.0, 12), list(range(1, 13)), 20_000, RngStreamConfig(seed, 2))
    p = [e.p_hat for e in est]
    assert all(b <= a for a, b in zip(p, p[1:]))


@pytest.mark.parametrize("dist", DISTS)
@pytest.mark.parametrize("w", [WeightFunction.constant(), WeightFunction.polynomial(1.0),
                               WeightFunction.exponential(1.0)], ids=str)
def test_two_to_minus_n_floor(dist, w):
    # a statistical check, so the seed is fixed rather than searched
    est = survival_curve(spec(dist, w, 0.0, 12), list(range(1, 13)), 400_000, RngStreamConfig(2718, 4))
    for e in est:
        assert e.p_hat >= 2.0**-e.horizon - 3 * e.std_err


def test_curve_is_prefix_consistent():
    s = spec("laplace", WeightFunction.polynomial(1.0), 0.0, 32)
    rng = RngStreamConfig(5, 4)
    curve = survival_curve(s, [4, 16, 32], 50_000, rng)
    single = simulate_survival(WalkSpec(s.weight, s.dist, 0.0, 16), 50_000, rng)
    assert curve[1].survivors == single.survivors


def test_exponential_weights_long_horizon():
    # e^{beta n} overflows near n = 710 / beta; the rescaled walk must not
    s = spec("gaussian", WeightFunction.exponential(2.0), 0.0, 2000)
    est = simulate_survival(s, 10_000, RngStreamConfig(1))
    assert est.survivors == 0 or est.p_hat > 0


def test_curve_validation():
    with pytest.raises(ValueError):
        survival_curve(spec(horizon=3), [], 10, RngStreamConfig(0))
    with pytest.raises(ValueError):
        survival_curve(spec(horizon=3), [3, 2], 10, RngStreamConfig(0))
    with pytest.raises(ValueError):
        simulate_survival(spec(horizon=3), 0, RngStreamConfig(0))


@pytest.mark.parametrize("p", [0.5, 1.0])
def test_exponents_agree_pairwise(p):
    from survwalk.analysis import curve_points, fit_polynomial_exponent
    hs = [2**k for k in range(3, 10)]
    fits = []
    for name in DISTS:
        s = spec(name, WeightFunction.polynomial(p), 0.0, hs[-1])
        fits.append(fit_polynomial_exponent(curve_points(survival_curve(s, hs, 10**6, RngStreamConfig(31, 8)))).value)
    assert max(fits) - min(fits) < 0.1
