"""Decay-rate fits for survival curves and the constants of the exponential case."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import bisect

LOG2 = math.log(2.0)
FIT_KINDS = ("polynomial_exponent", "exponential_rate", "subexp_rate")
MIN_SURVIVORS = 25


@dataclass(frozen=True)
class FitResult:
    kind: str
    value: float
    intercept: float
    std_err: float
    r_squared: float
    points_used: int
    dropped_zero: int = 0


@dataclass(frozen=True)
class BoundsReport:
    beta: float
    c_beta: float
    beta0: float
    beta1: float
    lower: float
    upper: float


def curve_points(estimates, min_survivors: int = MIN_SURVIVORS) -> list[tuple[int, float, float]]:
    """(N, p_hat, std_err) triples from Monte Carlo estimates with enough survivors to take logs."""
    return [(e.horizon, e.p_hat, e.std_err) for e in estimates if e.survivors >= min_survivors]


def _weighted_line(x, y, w):
    W = w.sum()
    xm = np.dot(w, x) / W
    ym = np.dot(w, y) / W
    sxx = np.dot(w, (x - xm) ** 2)
    slope = np.dot(w, (x - xm) * (y - ym)) / sxx
    intercept = ym - slope * xm
    resid = y - intercept - slope * x
    ss_res = float(np.dot(w, resid**2))
    ss_tot = float(np.dot(w, (y - ym) ** 2))
    dof = len(x) - 2
    se = math.sqrt(ss_res / dof / sxx) if dof > 0 else 0.0
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return float(slope), float(intercept), se, min(max(r2, 0.0), 1.0)


def _fit(curve, kind, transform, min_n, min_octaves=0.0):
    pts = [(float(n), float(p), float(se)) for n, p, se in curve if n >= min_n]
    zeros = sum(1 for _, p, _ in pts if p <= 0)
    if zeros:
        warnings.warn(f"dropped {zeros} point(s) with zero probability", stacklevel=3)
    pts = [pt for pt in pts if pt[1] > 0]
    if len(pts) < 3:
        raise ValueError(f"need at least 3 usable points, got {len(pts)}")
    n, p, se = map(np.array, zip(*pts))
    if min_octaves and math.log2(n.max() / n.min()) < min_octaves:
        raise ValueError(f"N values span less than {min_octaves} octaves")
    rel = se / p
    # exact curves (all std_err zero) get unit weights
    w = np.ones_like(p) if not np.any(rel > 0) else 1.0 / np.maximum(rel, rel[rel > 0].min()) ** 2
    slope, intercept, sd, r2 = _weighted_line(transform(n), np.log(p), w)
    return FitResult(kind, -slope, intercept, sd, r2, len(pts), zeros)


def fit_polynomial_exponent(curve, min_n: int = 8) -> FitResult:
    """theta from log p = a - theta log N."""
    return _fit(curve, "polynomial_exponent", np.log, min_n, min_octaves=2.0)


def fit_exponential_rate(curve, min_n: int = 8) -> FitResult:
    """lambda from log p = a - lambda N."""
    return _fit(curve, "exponential_rate", lambda n: n, min_n)


def fit_subexp_rate(curve, alpha: float, min_n: int = 8) -> FitResult:
    """nu/2 from log p = a - (nu/2) N^alpha."""
    if not 0 < alpha < 1:
        raise ValueError(f"alpha must be in (0,1), got {alpha}")
    return _fit(curve, "subexp_rate", lambda n: n**alpha, min_n)


def c_of(x: float) -> float:
    """e^{-x/2} / (1 - e^{-x/2})."""
    if not x > 0:
        raise ValueError(f"x must be > 0, got {x}")
    return math.exp(-x / 2.0) / -math.expm1(-x / 2.0)


def beta0() -> float:
    return 2.0 * math.log(1.0 + 1.0 / LOG2)


def _arcsin_gain(beta: float) -> float:
    return math.log1p(2.0 / math.pi * math.asin(math.exp(-beta / 2.0)))


def _h(beta: float) -> float:
    return beta / 2.0 - LOG2 + _arcsin_gain(beta)


@lru_cache(maxsize=None)
def beta1() -> float:
    """Root of beta/2 = log 2 - log(1 + (2/pi) arcsin(e^{-beta/2}))."""
    lo, hi = 0.01, beta0()
    if _h(lo) * _h(hi) > 0:
        raise RuntimeError("beta1 bracket does not straddle a root")
    return bisect(_h, lo, hi, xtol=1e-13, maxiter=200)


def lambda_lower(beta: float) -> float:
    b0 = beta0()
    if beta > b0:
        return LOG2 - c_of(beta)
    m = math.ceil(b0 / beta)
    return max((LOG2 - c_of(beta * m)) / m, 0.0)


def lambda_upper(beta: float) -> float:
    if beta <= beta1():
        return beta / 2.0
    return LOG2 - _arcsin_gain(beta)


def lambda_bounds(beta: float) -> BoundsReport:
    if not beta > 0:
        raise ValueError(f"beta must be > 0, got {beta}")
    return BoundsReport(beta, c_of(beta), beta0(), beta1(), lambda_lower(beta), lambda_upper(beta))
