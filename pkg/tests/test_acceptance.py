"""Acceptance criteria 1-9, each at its stated tolerance and time budget.

Every test appends one PASS/FAIL line to ``REPORT``; conftest prints them in
the terminal summary.  Run alone with ``pytest tests/test_acceptance.py -v``.
"""

import time

import numpy as np

from survwalk.analysis import (LOG2, beta0, beta1, c_of, curve_points, fit_exponential_rate,
                               fit_polynomial_exponent, lambda_bounds)
from survwalk.fredholm import lambda_beta, verify_fredholm
from survwalk.gaussian_exact import discrete_gaussian_survival, gaussian_survival_curve
from survwalk.model import IncrementDistribution, TimeChange, WalkSpec, WeightFunction
from survwalk.quadrature import QuadratureRule
from survwalk.rng import RngStreamConfig
from survwalk.simulate import enumerate_exact, exit_histogram, survival_curve

REPORT = []
FINE = QuadratureRule.with_nodes(L=16.0, nodes=1600)
DYADIC_5_14 = [2**k for k in range(5, 15)]


def record(number, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'}  criterion {number}: {detail}"
    REPORT.append(line)
    print(line)
    return ok


def exact_fit(curve, horizons):
    return fit_polynomial_exponent([(n, float(curve[n - 1]), 0.0) for n in horizons])


def test_criterion_1_closed_form_oracles():
    t0 = time.perf_counter()
    p2 = discrete_gaussian_survival(TimeChange.power(1.0), 2)
    p3 = discrete_gaussian_survival(TimeChange.power(1.0), 3)
    dt = time.perf_counter() - t0
    ok = abs(p2 - 0.375) < 1e-6 and abs(p3 - 0.3125) < 1e-6 and dt < 1.0
    assert record(1, ok, f"p(1,2)={p2:.12f} p(1,2,3)={p3:.12f} in {dt:.2f}s")


def test_criterion_2_power_clock_exponents(power_curve):
    bands = {1: (0.45, 0.55), 2: (0.93, 1.07), 3: (1.40, 1.60)}
    t0 = time.perf_counter()
    thetas = {q: exact_fit(power_curve(q, 0.0, 2**14, False), DYADIC_5_14).value for q in bands}
    dt = time.perf_counter() - t0
    ok = all(lo <= thetas[q] <= hi for q, (lo, hi) in bands.items()) and dt < 120
    detail = " ".join(f"q={q}:{thetas[q]:.4f}" for q in bands)
    assert record(2, ok, f"{detail} in {dt:.1f}s")


def test_criterion_3_universality():
    horizons = [2**k for k in range(3, 10)]
    rng = RngStreamConfig(20260101, 16)
    t0 = time.perf_counter()
    fits = {}
    for name in ("gaussian", "rademacher", "laplace", "uniform"):
        spec = WalkSpec(WeightFunction.polynomial(0.5), IncrementDistribution(name), 0.0, horizons[-1])
        est = survival_curve(spec, horizons, 10_000_000, rng)
        fits[name] = fit_polynomial_exponent(curve_points(est)).value
    dt = time.perf_counter() - t0
    ok = all(abs(v - 1.0) <= 0.1 for v in fits.values()) and dt < 600
    detail = " ".join(f"{k}:{v:.4f}" for k, v in fits.items())
    assert record(3, ok, f"{detail} (target 1.0 +- 0.1) in {dt:.1f}s")


def test_criterion_4_sandwich():
    t0 = time.perf_counter()
    lams, inside = [], True
    for beta in (0.5, 1.0, 2.0, 3.0, 4.0):
        lam = lambda_beta(beta).lambda_hat
        b = lambda_bounds(beta)
        inside &= b.lower <= lam <= b.upper
        lams.append(lam)
    dt = time.perf_counter() - t0
    ok = inside and bool(np.all(np.diff(lams) >= 0)) and dt < 30
    assert record(4, ok, "lambda " + " ".join(f"{v:.6f}" for v in lams) + f" in {dt:.2f}s")


def test_criterion_5_cross_engine():
    t0 = time.perf_counter()
    curve = gaussian_survival_curve(TimeChange.exponential(2.0), 60)
    fit = fit_exponential_rate([(n, curve[n - 1], 0.0) for n in range(20, 61)], min_n=20)
    lam = lambda_beta(2.0).lambda_hat
    dt = time.perf_counter() - t0
    ok = abs(fit.value - lam) < 1e-3 and dt < 30
    assert record(5, ok, f"fit {fit.value:.9f} vs lambda {lam:.9f} in {dt:.2f}s")


def test_criterion_6_constants():
    b0, b1 = beta0(), beta1()
    ok = abs(b0 - 1.786) <= 5e-4 and abs(b1 - 0.472) <= 1e-3 and abs(c_of(b0) - LOG2) <= 1e-12
    assert record(6, ok, f"beta0={b0:.6f} beta1={b1:.6f} c(beta0)-log2={c_of(b0) - LOG2:.2e}")


def test_criterion_7_bernoulli_breaks_universality():
    t0 = time.perf_counter()
    beta = LOG2
    w = WeightFunction.exponential(beta)
    exact = [enumerate_exact(WalkSpec(w, IncrementDistribution("rademacher"), 0.0, n)) for n in range(1, 21)]
    equal = all(p == 2.0**-n for n, p in enumerate(exact, 1))
    rad = fit_exponential_rate([(n, p, 0.0) for n, p in enumerate(exact, 1)], min_n=1).value
    curve = gaussian_survival_curve(TimeChange.exponential(2 * beta), 20)
    gauss = fit_exponential_rate([(n, curve[n - 1], 0.0) for n in range(1, 21)], min_n=1).value
    dt = time.perf_counter() - t0
    ok = equal and rad > gauss and dt < 60
    assert record(7, ok, f"2^-N exact={equal}, rademacher rate {rad:.6f} > gaussian rate {gauss:.6f} in {dt:.2f}s")


def test_criterion_8_counterexample():
    t0 = time.perf_counter()
    curve = gaussian_survival_curve(TimeChange.piecewise_exp(2.0), 10_000)
    n = np.arange(10, 10_001)
    ratio = curve[n - 1] * n**LOG2
    dt = time.perf_counter() - t0
    ok = bool(ratio.min() >= 1.0) and dt < 60
    assert record(8, ok, f"min p(N) N^log2 = {ratio.min():.4f} at N={n[np.argmin(ratio)]} in {dt:.2f}s")


def test_criterion_9_property_suites(power_curve):
    failures = []

    for beta in np.linspace(0.25, 6.0, 12):
        res = lambda_beta(beta)
        if not verify_fredholm(res).passed:
            failures.append(f"fredholm monotone/residual beta={beta:.3f}")
        if beta >= 0.5 and abs(lambda_beta(beta, L=24.0, nodes=1200).lambda_hat - res.lambda_hat) >= 1e-6:
            failures.append(f"fredholm refinement beta={beta:.3f}")

    worst = 0.0
    configs = [(TimeChange.power(1.0), 3), (TimeChange.exponential(2.0), 60),
               (TimeChange.exponential(2 * LOG2), 20), (TimeChange.piecewise_exp(2.0), 10_000)]
    for t, N in configs:
        a, b = gaussian_survival_curve(t, N), gaussian_survival_curve(t, N, rule=FINE)
        worst = max(worst, float(np.max(np.abs(a - b))))
    for q in (1, 2, 3):
        a, b = power_curve(q, 0.0, 2**14, False), power_curve(q, 0.0, 2**14, True)
        worst = max(worst, float(np.max(np.abs(a - b))))
        if not np.all(np.diff(a) <= 0):
            failures.append(f"exact curve q={q} not nonincreasing")
        if not np.all(a[:30] >= 2.0 ** -np.arange(1, 31)):
            failures.append(f"exact curve q={q} below 2^-N")
    if worst >= 1e-6:
        failures.append(f"grid refinement delta {worst:.2e}")

    for name in ("gaussian", "rademacher", "laplace", "uniform"):
        spec = WalkSpec(WeightFunction.polynomial(0.5), IncrementDistribution(name), 0.0, 24)
        rng = RngStreamConfig(77, 6)
        hists = [exit_histogram(spec, 24, 60_000, rng, workers=k) for k in (1, 2, 6)]
        if not all(np.array_equal(hists[0], h) for h in hists[1:]):
            failures.append(f"MC parallelism changes {name}")
        est = survival_curve(spec, list(range(1, 25)), 60_000, rng)
        p = [e.p_hat for e in est]
        if any(b > a for a, b in zip(p, p[1:])):
            failures.append(f"MC curve {name} increases")
        if any(e.p_hat < 2.0**-e.horizon - 3 * e.std_err for e in est):
            failures.append(f"MC {name} below 2^-N floor")

    ok = not failures
    assert record(9, ok, f"refinement delta {worst:.1e}; " + ("all properties hold" if ok else "; ".join(failures)))
