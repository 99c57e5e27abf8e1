"""Monte Carlo and exact enumeration of survival probabilities of weighted walks."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numba as nb
import numpy as np

from .model import IncrementDistribution, WalkSpec
from .rng import RngStreamConfig, philox4x64, to_unit_open

RAW, RESCALED = 0, 1
_SQRT3 = math.sqrt(3.0)
_INV_SQRT2 = 1.0 / math.sqrt(2.0)
_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class SurvivalEstimate:
    p_hat: float
    std_err: float
    paths: int
    survivors: int
    horizon: int
    seed: int

    @classmethod
    def from_counts(cls, survivors: int, paths: int, horizon: int, seed: int) -> "SurvivalEstimate":
        p = survivors / paths
        return cls(p, math.sqrt(p * (1.0 - p) / paths), paths, survivors, horizon, seed)


@nb.njit(cache=True, inline="always")
def _increments(w0, w1, w2, w3, dist, out):
    if dist == 0:
        r = math.sqrt(-2.0 * math.log(to_unit_open(w0)))
        a = _TWO_PI * to_unit_open(w1)
        out[0] = r * math.cos(a)
        out[1] = r * math.sin(a)
        r = math.sqrt(-2.0 * math.log(to_unit_open(w2)))
        a = _TWO_PI * to_unit_open(w3)
        out[2] = r * math.cos(a)
        out[3] = r * math.sin(a)
        return
    for lane in range(4):
        w = w0 if lane == 0 else (w1 if lane == 1 else (w2 if lane == 2 else w3))
        if dist == 1:
            out[lane] = 1.0 if (w >> np.uint64(63)) else -1.0
        elif dist == 2:
            u = to_unit_open(w) - 0.5
            mag = -_INV_SQRT2 * math.log(1.0 - 2.0 * abs(u))
            out[lane] = mag if u > 0 else -mag
        else:
            out[lane] = _SQRT3 * (2.0 * to_unit_open(w) - 1.0)


@nb.njit(cache=True, nogil=True)
def _exit_histogram(k0, k1, first_path, n_paths, weights, barriers, mode, decay, dist, early_exit):
    """Count first-violation steps; slot 0 collects paths surviving all steps.

    Increment ``n`` (1-based) of path ``j`` comes from Philox counter
    ``(j, (n-1)//4, 0, 0)``, lane ``(n-1) % 4``.
    """
    horizon = weights.shape[0]
    hist = np.zeros(horizon + 1, dtype=np.int64)
    buf = np.empty(4)
    zero = np.uint64(0)
    for j in range(n_paths):
        path = np.uint64(first_path + j)
        z = 0.0
        comp = 0.0
        exit_step = 0
        for n in range(horizon):
            lane = n & 3
            if lane == 0:
                w0, w1, w2, w3 = philox4x64(path, np.uint64(n >> 2), zero, zero, k0, k1)
                _increments(w0, w1, w2, w3, dist, buf)
            x = buf[lane]
            if mode == RESCALED:
                z = decay * z + x
            else:
                y = weights[n] * x - comp
                t = z + y
                comp = (t - z) - y
                z = t
            if z > barriers[n] and exit_step == 0:
                exit_step = n + 1
                if early_exit:
                    break
        hist[exit_step] += 1
    return hist


@nb.njit(cache=True)
def _draw(k0, k1, count, dist):
    out = np.empty(count)
    buf = np.empty(4)
    zero = np.uint64(0)
    for b in range((count + 3) // 4):
        w0, w1, w2, w3 = philox4x64(np.uint64(b), zero, zero, zero, k0, k1)
        _increments(w0, w1, w2, w3, dist, buf)
        for lane in range(min(4, count - 4 * b)):
            out[4 * b + lane] = buf[lane]
    return out


def draw_increments(dist: IncrementDistribution, count: int, rng: RngStreamConfig, stream: int = 0) -> np.ndarray:
    """``count`` i.i.d. increments from the same transform the walk simulator uses."""
    k0, k1 = rng.stream_key(stream)
    return _draw(np.uint64(k0), np.uint64(k1), int(count), dist.code)


def _walk_arrays(spec: WalkSpec, horizon: int):
    w = spec.weight
    n = np.arange(1, horizon + 1, dtype=float)
    if w.kind == "exponential":
        # W_n = Z_n e^{-beta n}; underflow of the barrier to 0 is exact in sign
        return np.ones(horizon), spec.barrier * np.exp(-w.beta * n), RESCALED, math.exp(-w.beta)
    return w.values(horizon).astype(float), np.full(horizon, float(spec.barrier)), RAW, 0.0


def exit_histogram(
    spec: WalkSpec, horizon: int, paths: int, rng: RngStreamConfig, workers: int = 1, early_exit: bool = True
) -> np.ndarray:
    """Histogram of first-exit steps over ``paths`` simulated walks.

    Streams are independent work units; the merged histogram is the same for
    any ``workers``.
    """
    if paths < 1:
        raise ValueError(f"paths must be >= 1, got {paths}")
    weights, barriers, mode, decay = _walk_arrays(spec, horizon)
    code = spec.dist.code

    def run(item):
        index, count = item
        if count == 0:
            return np.zeros(horizon + 1, dtype=np.int64)
        k0, k1 = rng.stream_key(index)
        return _exit_histogram(
            np.uint64(k0), np.uint64(k1), 0, count, weights, barriers, mode, decay, code, early_exit
        )

    parts = rng.partition(paths)
    if workers <= 1:
        hists = [run(item) for item in parts]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            hists = list(pool.map(run, parts))
    return np.sum(hists, axis=0)


def simulate_survival(
    spec: WalkSpec, paths: int, rng: RngStreamConfig, workers: int = 1, early_exit: bool = True
) -> SurvivalEstimate:
    hist = exit_histogram(spec, spec.horizon, paths, rng, workers, early_exit)
    return SurvivalEstimate.from_counts(int(hist[0]), paths, spec.horizon, rng.seed)


def survival_curve(
    spec_base: WalkSpec, horizons, paths: int, rng: RngStreamConfig, workers: int = 1
) -> list[SurvivalEstimate]:
    """Survival estimates at several horizons from one set of paths of length max(horizons)."""
    horizons = [int(h) for h in horizons]
    if not horizons:
        raise ValueError("horizon list is empty")
    if any(h < 1 for h in horizons) or any(b <= a for a, b in zip(horizons, horizons[1:])):
        raise ValueError("horizons must be positive and strictly increasing")
    hist = exit_histogram(spec_base, horizons[-1], paths, rng, workers)
    exits = np.cumsum(hist[1:])
    return [SurvivalEstimate.from_counts(int(paths - exits[h - 1]), paths, h, rng.seed) for h in horizons]


def enumerate_exact(spec: WalkSpec) -> float:
    """Exact survival probability for finite-support increments.

    Walks the support tree level by level, discarding prefixes that already
    crossed the barrier and merging prefixes with equal partial sums (the
    future of a prefix depends on nothing else).
    """
    if not spec.dist.finite_support:
        raise ValueError(f"{spec.dist.kind} increments do not have finite support")
    if spec.horizon > 25:
        raise ValueError(f"exact enumeration is limited to N <= 25, got {spec.horizon}")
    atoms = spec.dist.support()
    steps = spec.weight.values(spec.horizon)
    sums = np.zeros(1)
    probs = np.ones(1)
    for sigma in steps:
        sums = np.concatenate([sums + sigma * x for x, _ in atoms])
        probs = np.concatenate([probs * p for _, p in atoms])
        keep = sums <= spec.barrier
        sums, inverse = np.unique(sums[keep], return_inverse=True)
        probs = np.bincount(inverse, weights=probs[keep], minlength=len(sums))
    return float(probs.sum())
