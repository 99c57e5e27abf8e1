"""Survival probabilities of Brownian motion sampled on a deterministic clock.

``P(B_kappa(1) <= c, ..., B_kappa(N) <= c)`` is computed by carrying the
sub-probability density of ``u_n = B_kappa(n) / sqrt(kappa(n))`` restricted
to ``u_n <= c / sqrt(kappa(n))``.  One step is

    u_{n+1} = rho_n u_n + sqrt(1 - rho_n**2) xi,   rho_n = sqrt(kappa(n) / kappa(n+1)),

so the support of the conditioned density stays O(1) for every n.  The
closed-form Gaussian results used as oracles and bounds live here too.
"""

from __future__ import annotations

import math

import numba as nb
import numpy as np
from scipy.special import ndtr

from .analysis import beta0, c_of
from .model import TimeChange
from .quadrature import DensityGrid, QuadratureRule, clenshaw_legendre

DEFAULT_L = 12.0
DEFAULT_NODES = 800
# kernel std (in source coordinates) below which the semi-Lagrangian step is used
_NARROW = 0.5
_ZMAX = 9.0
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)
_ZREF, _ZW = np.polynomial.legendre.leggauss(16)
_HREF, _HW = np.polynomial.hermite_e.hermegauss(20)
_EMPTY = np.zeros(0)
# below this spread the unclipped windows use Gauss-Hermite
_HERMITE = 0.1


def default_rule(L: float = DEFAULT_L, nodes: int = DEFAULT_NODES) -> QuadratureRule:
    return QuadratureRule.with_nodes(L=L, nodes=nodes)


@nb.njit(cache=True)
def _nystrom_step(src_nodes, src_weights, g, dst_nodes, rho, s):
    out = np.zeros(dst_nodes.shape[0])
    wg = src_weights * g
    inv_s = 1.0 / s
    for i in range(dst_nodes.shape[0]):
        v = dst_nodes[i]
        acc = 0.0
        for j in range(src_nodes.shape[0]):
            z = (v - rho * src_nodes[j]) * inv_s
            if z < 38.0 and z > -38.0:
                acc += wg[j] * math.exp(-0.5 * z * z)
        out[i] = acc * inv_s * _INV_SQRT_2PI
    return out


@nb.njit(cache=True, inline="always")
def _eval_walk(coef, lower, edges, u, k):
    """Interpolant at ``u`` starting the panel search from ``k``; returns (value, panel)."""
    t = u - lower
    panels = edges.shape[0] - 1
    if t < 0.0 or t > edges[panels]:
        return 0.0, k
    while k > 0 and t < edges[k]:
        k -= 1
    while k < panels - 1 and t >= edges[k + 1]:
        k += 1
    a = edges[k]
    return clenshaw_legendre(coef, k, 2.0 * (t - a) / (edges[k + 1] - a) - 1.0), k


@nb.njit(cache=True)
def _semi_lagrangian_step(coef, lower, edges, dst_nodes, rho, s, zref, zw, nsub, zmax, href, hw):
    # f(v) = (1/rho) * int g((v - s z) / rho) phi(z) dz over the z-range mapping into the source domain
    upper = lower + edges[edges.shape[0] - 1]
    out = np.zeros(dst_nodes.shape[0])
    k = 0
    for i in range(dst_nodes.shape[0]):
        v = dst_nodes[i]
        z_lo = (v - rho * upper) / s
        z_hi = (v - rho * lower) / s
        acc = 0.0
        if z_lo <= -zmax and z_hi >= zmax and href.shape[0] > 0:
            # window entirely inside the domain: Gauss-Hermite
            for q in range(href.shape[0]):
                val, k = _eval_walk(coef, lower, edges, (v - s * href[q]) / rho, k)
                acc += hw[q] * val
            out[i] = acc * _INV_SQRT_2PI / rho
            continue
        z_lo = max(z_lo, -zmax)
        z_hi = min(z_hi, zmax)
        if z_hi <= z_lo:
            continue
        width = (z_hi - z_lo) / nsub
        for j in range(nsub):
            mid = z_lo + (j + 0.5) * width
            for q in range(zref.shape[0]):
                z = mid + 0.5 * width * zref[q]
                val, k = _eval_walk(coef, lower, edges, (v - s * z) / rho, k)
                acc += zw[q] * math.exp(-0.5 * z * z) * val
        out[i] = 0.5 * width * acc * _INV_SQRT_2PI / rho
    return out


def propagate(src: DensityGrid, dst_rule: QuadratureRule, rho: float, s: float) -> DensityGrid:
    """Apply the Gaussian transition u -> rho u + s xi and restrict to ``dst_rule``'s domain."""
    r = src.rule
    spread = s / rho
    if spread >= _NARROW:
        vals = _nystrom_step(r.nodes, r.weights, src.values, dst_rule.nodes, rho, s)
    else:
        href, hw = (_HREF, _HW) if spread < _HERMITE else (_EMPTY, _EMPTY)
        vals = _semi_lagrangian_step(r.legendre_coefficients(src.values), r.lower, r.edges, dst_rule.nodes, rho, s, _ZREF, _ZW, 4, _ZMAX, href, hw)
    return DensityGrid(dst_rule, vals)


def gaussian_survival_curve(
    t: TimeChange, N: int, barrier: float = 0.0, rule: QuadratureRule | None = None
) -> np.ndarray:
    """Survival probabilities for horizons 1..N (index n-1 holds horizon n)."""
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    rule = rule or default_rule()
    logk = np.asarray(t.log_values(N), dtype=float)
    steps = np.diff(logk)
    if np.any(steps < 0):
        bad = int(np.argmax(steps < 0)) + 1
        raise ValueError(f"kappa must be nondecreasing; kappa({bad + 1}) < kappa({bad})")
    tops = barrier * np.exp(-0.5 * logk)

    r = rule.shifted(tops[0])
    dens = DensityGrid(r, _INV_SQRT_2PI * np.exp(-0.5 * r.nodes**2))
    log_mass = np.empty(N)
    running = 0.0
    for n in range(N):
        if n > 0:
            d = steps[n - 1]
            if d == 0.0:
                # unchanged clock: the conditioning event is the same
                log_mass[n] = running
                continue
            rho = math.exp(-0.5 * d)
            s = math.sqrt(-math.expm1(-d))
            dens = propagate(dens, rule.shifted(tops[n]), rho, s)
        m = dens.mass
        if not m > 0:
            log_mass[n:] = -np.inf
            break
        running += math.log(m)
        log_mass[n] = running
        dens = DensityGrid(dens.rule, dens.values / m)
    return np.exp(log_mass)


def discrete_gaussian_survival(
    t: TimeChange, N: int, barrier: float = 0.0, rule: QuadratureRule | None = None
) -> float:
    return float(gaussian_survival_curve(t, N, barrier, rule)[-1])


def ou_grid_survival(beta: float, N: int, rule: QuadratureRule | None = None) -> float:
    """P(sup_{n=0..N} B(e^{beta n}) <= 0), i.e. N + 1 sampling times."""
    return discrete_gaussian_survival(TimeChange.exponential(beta), N + 1, 0.0, rule)


def pair_orthant_prob(s: float, t: float) -> float:
    """P(B_s <= 0, B_t <= 0) for 0 < s < t."""
    if not 0 < s < t:
        raise ValueError(f"need 0 < s < t, got s={s}, t={t}")
    return 0.25 + math.atan(math.sqrt(s / (t - s))) / (2.0 * math.pi)


def trivariate_orthant_prob(k1: float, k2: float, k3: float) -> float:
    """P(B_k1 <= 0, B_k2 <= 0, B_k3 <= 0) for 0 < k1 < k2 < k3."""
    if not 0 < k1 < k2 < k3:
        raise ValueError("need 0 < k1 < k2 < k3")
    r = [math.sqrt(a / b) for a, b in ((k1, k2), (k1, k3), (k2, k3))]
    return 0.125 + sum(math.asin(x) for x in r) / (4.0 * math.pi)


def ou_survival_continuous(T: float) -> float:
    """P(sup_{[0,T]} U <= 0) for the stationary OU process with covariance e^{-|t-s|/2}."""
    if T < 0:
        raise ValueError(f"T must be >= 0, got {T}")
    return math.asin(math.exp(-T / 2.0)) / math.pi


def bm_sup_tail(u: float) -> float:
    """P(sup_{[0,1]} B > u) = P(|B_1| > u), by reflection."""
    if u < 0:
        raise ValueError(f"u must be >= 0, got {u}")
    return float(2.0 * ndtr(-u))


def exp_case_lower_bound(beta: float, N: int) -> float:
    """Lower bound on P(sup_{n=0..N} B(e^{beta n}) <= 0) from the one-step conditional."""
    if not beta > 0:
        raise ValueError(f"beta must be > 0, got {beta}")
    if N < 0:
        raise ValueError(f"N must be >= 0, got {N}")
    return 0.5 * (0.5 + math.asin(math.exp(-beta / 2.0)) / math.pi) ** N


def exp_case_upper_bound(beta: float, N: int) -> float:
    """Upper bound on P(sup_{n=0..N} B(e^{beta n}) <= 0).

    For ``beta <= beta0`` the clock is thinned by ``m = ceil(beta0 / beta)``,
    which needs ``N > m``.
    """
    if not beta > 0:
        raise ValueError(f"beta must be > 0, got {beta}")
    if N < 0:
        raise ValueError(f"N must be >= 0, got {N}")
    b0 = beta0()
    if beta > b0:
        return 0.5 * math.exp(-(math.log(2.0) - c_of(beta)) * N)
    m = math.ceil(b0 / beta)
    if N <= m:
        raise ValueError(f"small-beta bound needs N > m = {m}, got N={N}")
    c = c_of(beta * m)
    return math.exp(-(math.log(2.0) - c) / m * N - c)
