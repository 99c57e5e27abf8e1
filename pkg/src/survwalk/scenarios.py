"""Canned reproduction scenarios, one per acceptance check, run by ``survwalk reproduce``."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .analysis import (LOG2, beta0, beta1, c_of, curve_points, fit_exponential_rate,
                       fit_polynomial_exponent, lambda_bounds)
from .fredholm import lambda_beta, verify_fredholm
from .gaussian_exact import default_rule, discrete_gaussian_survival, gaussian_survival_curve
from .model import DISTRIBUTIONS, IncrementDistribution, TimeChange, WalkSpec, WeightFunction
from .rng import RngStreamConfig
from .simulate import enumerate_exact, survival_curve

UNIVERSALITY_SEED = 20260101
UNIVERSALITY_PATHS = 10_000_000
UNIVERSALITY_STREAMS = 16
POWER_CLOCK_BANDS = {1: (0.45, 0.55), 2: (0.93, 1.07), 3: (1.40, 1.60)}
SANDWICH_BETAS = (0.5, 1.0, 2.0, 3.0, 4.0)
REFINE_TOL = 1e-6


@dataclass(frozen=True)
class Check:
    label: str
    passed: bool
    detail: str


def dyadic(lo: int, hi: int) -> list[int]:
    return [2**k for k in range(lo, hi + 1)]


def refined_rule():
    return default_rule(L=16.0, nodes=1600)


def exact_points(t: TimeChange, horizons, barrier=0.0, rule=None):
    curve = gaussian_survival_curve(t, horizons[-1], barrier, rule)
    return [(n, float(curve[n - 1]), 0.0) for n in horizons]


def closed_form_oracles() -> list[Check]:
    p2 = discrete_gaussian_survival(TimeChange.power(1.0), 2)
    p3 = discrete_gaussian_survival(TimeChange.power(1.0), 3)
    return [
        Check("kappa=(1,2) equals 0.375", abs(p2 - 0.375) < 1e-6, f"{p2:.15f}"),
        Check("kappa=(1,2,3) equals 0.3125", abs(p3 - 0.3125) < 1e-6, f"{p3:.15f}"),
    ]


def power_clock_exponent(q: int) -> list[Check]:
    lo, hi = POWER_CLOCK_BANDS[q]
    fit = fit_polynomial_exponent(exact_points(TimeChange.power(q), dyadic(5, 14)))
    return [Check(f"q={q} exponent in [{lo}, {hi}]", lo <= fit.value <= hi, f"theta={fit.value:.6f}")]


def universality_fits(p: float = 0.5, horizons=None, paths: int = UNIVERSALITY_PATHS,
                      seed: int = UNIVERSALITY_SEED, streams: int = UNIVERSALITY_STREAMS, workers: int = 1):
    horizons = horizons or dyadic(3, 9)
    rng = RngStreamConfig(seed, streams)
    fits = {}
    for name in DISTRIBUTIONS:
        spec = WalkSpec(WeightFunction.polynomial(p), IncrementDistribution(name), 0.0, horizons[-1])
        est = survival_curve(spec, horizons, paths, rng, workers)
        fits[name] = fit_polynomial_exponent(curve_points(est))
    return fits


def universality() -> list[Check]:
    fits = universality_fits()
    checks = [Check(f"{name} exponent within 0.1 of 1.0", abs(f.value - 1.0) <= 0.1,
                    f"theta={f.value:.6f} +- {f.std_err:.2g}") for name, f in fits.items()]
    vals = [f.value for f in fits.values()]
    checks.append(Check("pairwise spread below 0.1", max(vals) - min(vals) < 0.1,
                        f"spread={max(vals) - min(vals):.4f}"))
    return checks


def lambda_bounds_sandwich() -> list[Check]:
    checks, lams = [], []
    for beta in SANDWICH_BETAS:
        lam = lambda_beta(beta).lambda_hat
        b = lambda_bounds(beta)
        lams.append(lam)
        checks.append(Check(f"beta={beta} lower <= lambda <= upper", b.lower <= lam <= b.upper,
                            f"{b.lower:.6f} <= {lam:.6f} <= {b.upper:.6f}"))
    checks.append(Check("lambda nondecreasing in beta", bool(np.all(np.diff(lams) >= 0)),
                        " ".join(f"{v:.6f}" for v in lams)))
    return checks


def cross_engine_rate() -> list[Check]:
    ns = list(range(20, 61))
    fit = fit_exponential_rate(exact_points(TimeChange.exponential(2.0), ns), min_n=20)
    lam = lambda_beta(2.0).lambda_hat
    return [Check("exact-curve rate matches lambda(2) within 1e-3", abs(fit.value - lam) < 1e-3,
                  f"fit={fit.value:.9f} lambda={lam:.9f}")]


def constants() -> list[Check]:
    b0, b1 = beta0(), beta1()
    return [
        Check("beta0 = 1.786 +- 5e-4", abs(b0 - 1.786) <= 5e-4, f"{b0:.9f}"),
        Check("beta1 = 0.472 +- 1e-3", abs(b1 - 0.472) <= 1e-3, f"{b1:.9f}"),
        Check("c(beta0) = log 2 +- 1e-12", abs(c_of(b0) - LOG2) <= 1e-12, f"{c_of(b0) - LOG2:.3g}"),
    ]


def bernoulli_breaks_universality() -> list[Check]:
    beta = LOG2
    w = WeightFunction.exponential(beta)
    exact = [enumerate_exact(WalkSpec(w, IncrementDistribution("rademacher"), 0.0, n)) for n in range(1, 21)]
    equal = all(p == 2.0**-n for n, p in enumerate(exact, 1))
    rad = fit_exponential_rate([(n, p, 0.0) for n, p in enumerate(exact, 1)], min_n=1)
    gauss = fit_exponential_rate(exact_points(TimeChange.exponential(2.0 * beta), list(range(1, 21))), min_n=1)
    return [
        Check("rademacher survival equals 2^-N for N=1..20", equal, f"p(20)={exact[-1]!r}"),
        Check("rademacher rate exceeds Gaussian rate", rad.value > gauss.value,
              f"{rad.value:.6f} > {gauss.value:.6f}"),
    ]


def slow_clock_floor() -> list[Check]:
    curve = gaussian_survival_curve(TimeChange.piecewise_exp(2.0), 10_000)
    n = np.arange(10, 10_001)
    ratio = curve[n - 1] / n ** -LOG2
    worst = int(n[np.argmin(ratio)])
    return [Check("p(N) >= N^-log2 on [10, 1e4]", bool(ratio.min() >= 1.0),
                  f"min ratio {ratio.min():.4f} at N={worst}")]


def property_suite() -> list[Check]:
    checks = []
    for beta in (0.5, 2.0, 4.0):
        res = lambda_beta(beta)
        diag = verify_fredholm(res)
        checks.append(Check(f"fredholm beta={beta} ratios monotone, residual small", diag.passed,
                            f"margin={diag.monotone_margin:.3g} residual={diag.residual_l1:.3g}"))
        fine = lambda_beta(beta, L=16.0, nodes=1200).lambda_hat
        checks.append(Check(f"fredholm beta={beta} refinement delta < 1e-6",
                            abs(fine - res.lambda_hat) < REFINE_TOL, f"{abs(fine - res.lambda_hat):.3g}"))

    fine = refined_rule()
    for label, t, n in (("power q=1", TimeChange.power(1.0), 1024), ("power q=2", TimeChange.power(2.0), 1024),
                        ("exp beta=2", TimeChange.exponential(2.0), 60)):
        a = gaussian_survival_curve(t, n)
        b = gaussian_survival_curve(t, n, rule=fine)
        rel = float(np.max(np.abs(a - b) / b))
        checks.append(Check(f"exact {label} refinement delta < 1e-6", rel < REFINE_TOL, f"max rel {rel:.3g}"))
        checks.append(Check(f"exact {label} nonincreasing", bool(np.all(np.diff(a) <= 0)), ""))
        floor = 2.0 ** -np.arange(1, n + 1, dtype=float)
        checks.append(Check(f"exact {label} above 2^-N", bool(np.all(a >= floor)), ""))

    spec = WalkSpec(WeightFunction.polynomial(1.0), IncrementDistribution("laplace"), 0.0, 64)
    hs = dyadic(0, 6)
    one = survival_curve(spec, hs, 200_000, RngStreamConfig(11, 8), workers=1)
    many = survival_curve(spec, hs, 200_000, RngStreamConfig(11, 8), workers=4)
    checks.append(Check("MC identical for 1 and 4 workers", one == many, ""))
    p = [e.p_hat for e in one]
    checks.append(Check("MC curve nonincreasing", all(b <= a for a, b in zip(p, p[1:])), ""))
    for name in DISTRIBUTIONS:
        s = WalkSpec(WeightFunction.exponential(1.0), IncrementDistribution(name), 0.0, 12)
        est = survival_curve(s, list(range(1, 13)), 200_000, RngStreamConfig(5, 4))
        ok = all(e.p_hat >= 2.0**-e.horizon - 3 * e.std_err for e in est)
        checks.append(Check(f"MC {name} above 2^-N floor", ok, f"p(12)={est[-1].p_hat:.3g}"))
    return checks


SCENARIOS: dict[str, Callable[[], list[Check]]] = {
    "closed-form-oracles": closed_form_oracles,
    "theorem1-q1": lambda: power_clock_exponent(1),
    "theorem1-q2": lambda: power_clock_exponent(2),
    "theorem1-q3": lambda: power_clock_exponent(3),
    "theorem2-universality": universality,
    "lambda-bounds-sandwich": lambda_bounds_sandwich,
    "cross-engine-rate": cross_engine_rate,
    "constants": constants,
    "bernoulli-breaks-universality": bernoulli_breaks_universality,
    "counterexample-remark": slow_clock_floor,
    "property-suite": property_suite,
}


def run_scenario(name: str, emit=print) -> bool:
    if name not in SCENARIOS:
        raise KeyError(name)
    ok = True
    for c in SCENARIOS[name]():
        ok &= c.passed
        emit(f"{'PASS' if c.passed else 'FAIL'}  {name}: {c.label}" + (f"  ({c.detail})" if c.detail else ""))
    return ok
