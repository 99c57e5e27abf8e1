"""Composite Gauss-Legendre rules and densities carried on them."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numba as nb
import numpy as np
from scipy.optimize import brentq


def graded_widths(L: float, panels: int, h_min: float, ratio: float) -> np.ndarray:
    """Panel widths growing geometrically from ``h_min`` and capped so they sum to ``L``.

    Index 0 is the panel touching the upper end of the domain.
    """
    if L / panels <= h_min:
        return np.full(panels, L / panels)
    geo = h_min * ratio ** np.arange(panels)
    if geo.sum() <= L:
        return geo * (L / geo.sum())
    cap = brentq(lambda H: np.minimum(geo, H).sum() - L, L / panels, geo.max())
    w = np.minimum(geo, cap)
    return w * (L / w.sum())


@lru_cache(maxsize=64)
def _geometry(L, panels, order, h_min, ratio):
    if ratio == 1.0 or h_min <= 0:
        widths = np.full(panels, L / panels)
    else:
        widths = graded_widths(L, panels, h_min, ratio)
    # edges relative to the lower end, increasing
    rel = np.concatenate([[0.0], np.cumsum(widths[::-1])])
    rel[-1] = L
    x, w = np.polynomial.legendre.leggauss(order)
    diff = x[:, None] - x[None, :]
    np.fill_diagonal(diff, 1.0)
    bary = 1.0 / diff.prod(axis=1)
    # node values -> per-panel Legendre coefficients (discrete orthogonality of GL nodes)
    m = np.arange(order)
    to_legendre = (m[:, None] + 0.5) * w[None, :] * np.polynomial.legendre.legvander(x, order - 1).T
    out = (rel, x, w, bary / np.abs(bary).max(), to_legendre)
    for arr in out:
        arr.setflags(write=False)
    return out


@dataclass(frozen=True)
class QuadratureRule:
    """Composite Gauss-Legendre rule on ``[upper - L, upper]``.

    Panels are graded toward ``upper`` (smallest width ``h_min``, growth
    ``ratio``); ``ratio = 1`` gives equal panels.  Node values define a
    piecewise polynomial, one Lagrange interpolant per panel.
    """

    L: float
    panels: int
    order: int
    upper: float = 0.0
    h_min: float = 0.0
    ratio: float = 1.0

    def __post_init__(self):
        if not self.L > 0:
            raise ValueError(f"truncation L must be positive, got {self.L}")
        if self.panels < 1 or self.order < 2:
            raise ValueError("need at least one panel and order >= 2")
        if self.ratio < 1.0:
            raise ValueError(f"grading ratio must be >= 1, got {self.ratio}")
        rel, x, w, bary, to_legendre = _geometry(self.L, self.panels, self.order, self.h_min, self.ratio)
        left, h = rel[:-1], np.diff(rel)
        nodes = self.lower + (left[:, None] + 0.5 * h[:, None] * (x + 1.0)[None, :]).ravel()
        weights = (0.5 * h[:, None] * w[None, :]).ravel()
        for name, arr in (("nodes", nodes), ("weights", weights)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        for name, arr in (("edges", rel), ("ref_nodes", x), ("bary", bary), ("to_legendre", to_legendre)):
            object.__setattr__(self, name, arr)

    @classmethod
    def with_nodes(cls, L: float = 12.0, nodes: int = 800, order: int = 10, upper: float = 0.0,
                   h_min: float = 0.02, ratio: float = 1.3) -> "QuadratureRule":
        """Rule with about ``nodes`` points, rounded up to whole panels."""
        if nodes < order:
            raise ValueError(f"need at least {order} nodes, got {nodes}")
        return cls(float(L), -(-nodes // order), order, float(upper), h_min, ratio)

    @property
    def lower(self) -> float:
        return self.upper - self.L

    @property
    def size(self) -> int:
        return self.panels * self.order

    def shifted(self, upper: float) -> "QuadratureRule":
        return QuadratureRule(self.L, self.panels, self.order, float(upper), self.h_min, self.ratio)

    def integrate(self, values) -> float:
        return float(np.dot(self.weights, values))

    def legendre_coefficients(self, values) -> np.ndarray:
        """(panels, order) array of Legendre coefficients of the panelwise interpolant."""
        return np.ascontiguousarray(np.asarray(values, dtype=float).reshape(self.panels, self.order) @ self.to_legendre.T)

    def interpolate(self, values, points) -> np.ndarray:
        """Evaluate the panelwise interpolant of node ``values`` (zero outside the domain)."""
        pts = np.atleast_1d(np.asarray(points, dtype=float))
        out = np.empty(pts.size)
        _interp_many(np.asarray(values, dtype=float), self.lower, self.edges, self.ref_nodes, self.bary,
                     pts.ravel(), out)
        return out.reshape(pts.shape)


@nb.njit(cache=True, inline="always")
def interp_point(values, lower, edges, ref, bary, u):
    """Panelwise barycentric interpolation; ``edges`` are relative to ``lower``."""
    order = ref.shape[0]
    panels = edges.shape[0] - 1
    t = u - lower
    if t < 0.0 or t > edges[panels]:
        return 0.0
    k = np.searchsorted(edges, t, side="right") - 1
    if k >= panels:
        k = panels - 1
    a = edges[k]
    x = 2.0 * (t - a) / (edges[k + 1] - a) - 1.0
    base = k * order
    num = 0.0
    den = 0.0
    for j in range(order):
        d = x - ref[j]
        if d == 0.0:
            return values[base + j]
        c = bary[j] / d
        num += c * values[base + j]
        den += c
    return num / den


@nb.njit(cache=True, inline="always")
def clenshaw_legendre(coef, k, x):
    """Evaluate sum_m coef[k, m] P_m(x)."""
    order = coef.shape[1]
    b1 = 0.0
    b2 = 0.0
    for m in range(order - 1, 0, -1):
        b0 = coef[k, m] + (2.0 * m + 1.0) / (m + 1.0) * x * b1 - (m + 1.0) / (m + 2.0) * b2
        b2 = b1
        b1 = b0
    return coef[k, 0] + x * b1 - 0.5 * b2


@nb.njit(cache=True)
def _interp_many(values, lower, edges, ref, bary, pts, out):
    for i in range(pts.shape[0]):
        out[i] = interp_point(values, lower, edges, ref, bary, pts[i])


@dataclass(frozen=True)
class DensityGrid:
    """Nonnegative (sub-probability) density sampled at the nodes of ``rule``."""

    rule: QuadratureRule
    values: np.ndarray

    def __post_init__(self):
        if self.values.shape != (self.rule.size,):
            raise ValueError("one value per node required")

    @property
    def mass(self) -> float:
        return self.rule.integrate(self.values)

    def normalized(self) -> "DensityGrid":
        return DensityGrid(self.rule, self.values / self.mass)

    def __call__(self, points) -> np.ndarray:
        return self.rule.interpolate(self.values, points)
