import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.special import ndtr

from survwalk.analysis import beta0, c_of, lambda_bounds
from survwalk.fredholm import NonConvergenceError, build_kernel, lambda_beta, verify_fredholm


@pytest.fixture(scope="module")
def solved():
    return {b: lambda_beta(b) for b in (0.3, 0.5, 1.0, 2.0, 3.0, 4.0, 6.0)}


@given(beta=st.floats(0.01, 8.0))
def test_kernel_sub_markov(beta):
    k = build_kernel(beta)
    assert np.all(k.matrix >= 0)
    assert np.all(k.row_masses() <= 1 + 1e-8)


def test_row_masses_match_closed_form():
    k = build_kernel(1.0)
    y = k.rule.nodes
    # mass that lands in [-L, 0] from start y
    exact = ndtr(-k.rho * y / k.noise_sigma) - ndtr((-12.0 - k.rho * y) / k.noise_sigma)
    assert np.max(np.abs(k.row_masses() - exact)) < 1e-8
    assert k.stay_probability(0.0) == 0.5
    assert k.stay_probability(-12.0) == pytest.approx(ndtr(k.rho * 12.0 / k.noise_sigma), abs=1e-15)
    assert k.row_masses()[0] == pytest.approx(1.0, abs=1e-6)


def test_kernel_not_symmetric():
    k = build_kernel(1.0, nodes=100)
    dens = k.matrix / k.rule.weights[None, :]
    assert not np.allclose(dens, dens.T)


def test_kernel_validation():
    for args in ((0.0,), (1.0, -1.0), (1.0, 12.0, 8)):
        with pytest.raises(ValueError):
            build_kernel(*args)
    with pytest.raises(ValueError):
        lambda_beta(1.0, tol=0.0)


def test_bound_examples(solved):
    assert 0.53662 <= solved[4.0].lambda_hat <= 0.61027
    assert 0.00132 <= solved[0.3].lambda_hat <= 0.15


@pytest.mark.parametrize("beta", [0.3, 0.5, 1.0, 2.0, 4.0, 6.0])
def test_first_ratio_is_pair_orthant(solved, beta):
    f1 = solved[beta].mass_ratios[0]
    assert f1 == pytest.approx(0.5 + math.asin(math.exp(-beta / 2)) / math.pi, abs=1e-6)


def test_result_invariants(solved):
    for res in solved.values():
        diag = verify_fredholm(res)
        assert diag.passed
        assert res.lambda_hat == -math.log(res.mass_ratios[-1])
        assert np.all(res.eigenfunction.values >= -1e-300)
        assert res.eigenfunction.mass == pytest.approx(1.0, abs=1e-12)
    assert solved[2.0].residual_l1 < 1e-6
    assert solved[1.0].lambda_hat < solved[2.0].lambda_hat < solved[4.0].lambda_hat


def test_sandwich(solved):
    for beta in (0.5, 1.0, 2.0, 3.0, 4.0):
        b = lambda_bounds(beta)
        assert b.lower <= solved[beta].lambda_hat <= b.upper


def test_monotone_in_beta():
    lams = [lambda_beta(b).lambda_hat for b in np.linspace(0.25, 6.0, 20)]
    assert np.all(np.diff(lams) >= 0)


@pytest.mark.parametrize("beta", [0.5, 1.0, 3.0, 6.0])
def test_discretization_stable(solved, beta):
    base = solved[beta].lambda_hat if beta in solved else lambda_beta(beta).lambda_hat
    assert abs(lambda_beta(beta, L=24.0, nodes=1200).lambda_hat - base) < 1e-6


def test_approach_to_log2(solved):
    beta = 6.0
    assert beta > beta0()
    gap = math.log(2) - solved[beta].lambda_hat
    assert (2 / math.pi) * math.exp(-beta / 2) * 0.8 <= gap <= c_of(beta)


def test_nonconvergence_reports_last_ratio():
    with pytest.raises(NonConvergenceError) as info:
        lambda_beta(0.5, max_iter=3)
    assert info.value.iterations == 3
    assert 0.5 < info.value.last_ratio < 1.0
