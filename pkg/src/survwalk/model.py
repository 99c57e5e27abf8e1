"""Weight functions, variance clocks and increment laws of a weighted random walk.

The walk is ``Z_n = sum_{k<=n} sigma(k) X_k``.  In the Gaussian case it has the
law of Brownian motion sampled at ``kappa(n) = sum_{k<=n} sigma(k)**2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

WEIGHT_KINDS = ("polynomial", "exponential", "constant", "table")
TIME_CHANGE_KINDS = ("from_sigma", "power", "subexp", "exponential", "piecewise_exp")


@dataclass(frozen=True)
class WeightFunction:
    kind: str
    p: float = 0.0
    beta: float = 0.0
    table: tuple[float, ...] = ()

    def __post_init__(self):
        if self.kind not in WEIGHT_KINDS:
            raise ValueError(f"unknown weight kind {self.kind!r}")
        if self.kind == "polynomial" and not self.p > 0:
            raise ValueError(f"polynomial weight needs p > 0, got {self.p}")
        if self.kind == "exponential" and not self.beta > 0:
            raise ValueError(f"exponential weight needs beta > 0, got {self.beta}")
        if self.kind == "table":
            if not self.table:
                raise ValueError("table weight needs at least one value")
            if any(not (v > 0 and math.isfinite(v)) for v in self.table):
                raise ValueError("table weights must be finite and positive")

    @classmethod
    def polynomial(cls, p: float) -> "WeightFunction":
        return cls("polynomial", p=float(p))

    @classmethod
    def exponential(cls, beta: float) -> "WeightFunction":
        return cls("exponential", beta=float(beta))

    @classmethod
    def constant(cls) -> "WeightFunction":
        return cls("constant")

    @classmethod
    def from_table(cls, values) -> "WeightFunction":
        return cls("table", table=tuple(float(v) for v in values))

    def values(self, n_max: int) -> np.ndarray:
        """sigma(1), ..., sigma(n_max) as a float array."""
        n = np.arange(1, n_max + 1, dtype=float)
        if self.kind == "polynomial":
            return n**self.p
        if self.kind == "exponential":
            return np.exp(self.beta * n)
        if self.kind == "constant":
            return np.ones(n_max)
        if n_max > len(self.table):
            raise IndexError(f"table weight has {len(self.table)} entries, asked for {n_max}")
        return np.array(self.table[:n_max])


def sigma_eval(w: WeightFunction, n: int) -> float:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if w.kind == "polynomial":
        return float(n) ** w.p
    if w.kind == "exponential":
        return math.exp(w.beta * n)
    if w.kind == "constant":
        return 1.0
    if n > len(w.table):
        raise IndexError(f"table weight has {len(w.table)} entries, asked for n={n}")
    return w.table[n - 1]


def _kahan_cumsum(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x)
    total = 0.0
    comp = 0.0
    for i, v in enumerate(x.tolist()):
        y = v - comp
        t = total + y
        comp = (t - total) - y
        total = t
        out[i] = total
    return out


def _piecewise_k(n: np.ndarray) -> np.ndarray:
    # floor(log n), corrected where rounding lands on the wrong side of e^k
    k = np.floor(np.log(n)).astype(np.int64)
    k = np.where(np.exp(k + 1.0) <= n, k + 1, k)
    k = np.where(np.exp(k.astype(float)) > n, k - 1, k)
    return np.maximum(k, 1)


@dataclass(frozen=True)
class TimeChange:
    """The variance clock ``kappa``.

    ``piecewise_exp`` is ``exp(q k)`` on ``e^k <= n < e^(k+1)``; the points
    ``n = 1, 2`` (where ``k`` would be 0) are folded into the ``k = 1`` level.
    """

    kind: str
    weight: WeightFunction | None = None
    q: float = 0.0
    nu: float = 0.0
    alpha: float = 0.0
    beta: float = 0.0
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if self.kind not in TIME_CHANGE_KINDS:
            raise ValueError(f"unknown time change kind {self.kind!r}")
        if self.kind == "from_sigma" and self.weight is None:
            raise ValueError("from_sigma needs a weight function")
        if self.kind in ("power", "piecewise_exp") and not self.q > 0:
            raise ValueError(f"{self.kind} needs q > 0, got {self.q}")
        if self.kind == "subexp" and not (self.nu > 0 and 0 < self.alpha < 1):
            raise ValueError(f"subexp needs nu > 0 and alpha in (0,1), got {self.nu}, {self.alpha}")
        if self.kind == "exponential" and not self.beta > 0:
            raise ValueError(f"exponential needs beta > 0, got {self.beta}")

    @classmethod
    def from_sigma(cls, w: WeightFunction) -> "TimeChange":
        return cls("from_sigma", weight=w)

    @classmethod
    def power(cls, q: float) -> "TimeChange":
        return cls("power", q=float(q))

    @classmethod
    def subexp(cls, nu: float, alpha: float) -> "TimeChange":
        return cls("subexp", nu=float(nu), alpha=float(alpha))

    @classmethod
    def exponential(cls, beta: float) -> "TimeChange":
        return cls("exponential", beta=float(beta))

    @classmethod
    def piecewise_exp(cls, q: float) -> "TimeChange":
        return cls("piecewise_exp", q=float(q))

    def log_values(self, n_max: int) -> np.ndarray:
        """log kappa(1), ..., log kappa(n_max).

        Exponential clocks are only ever handled in log form so that
        ``kappa`` never overflows.
        """
        if n_max < 1:
            raise ValueError(f"n_max must be >= 1, got {n_max}")
        cached = self._cache.get("log")
        if cached is not None and len(cached) >= n_max:
            return cached[:n_max]
        n = np.arange(1, n_max + 1, dtype=float)
        if self.kind == "power":
            out = self.q * np.log(n)
        elif self.kind == "subexp":
            out = self.nu * n**self.alpha
        elif self.kind == "exponential":
            out = self.beta * n
        elif self.kind == "piecewise_exp":
            out = self.q * _piecewise_k(n).astype(float)
        elif self.weight.kind == "exponential":
            # sum_{k<=n} e^{2 b k} = e^{2 b n} (1 - e^{-2 b n}) / (1 - e^{-2 b})
            b2 = 2.0 * self.weight.beta
            out = b2 * n + np.log(-np.expm1(-b2 * n)) - math.log(-math.expm1(-b2))
        else:
            s = self.weight.values(n_max)
            out = np.log(_kahan_cumsum(s * s))
        out.setflags(write=False)
        self._cache["log"] = out
        return out

    def values(self, n_max: int) -> np.ndarray:
        return np.exp(self.log_values(n_max))


def kappa_eval(t: TimeChange, n: int) -> float:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if t.kind == "power":
        return float(n) ** t.q
    if t.kind == "exponential":
        return math.exp(t.beta * n)
    if t.kind == "subexp":
        return math.exp(t.nu * n**t.alpha)
    if t.kind == "piecewise_exp":
        return math.exp(t.q * int(_piecewise_k(np.array([float(n)]))[0]))
    if t.weight.kind == "constant":
        return float(n)
    return float(t.values(n)[n - 1])


def ar1_params(beta: float) -> tuple[float, float]:
    """Autoregression coefficient and innovation scale of the discrete OU chain."""
    if not beta > 0:
        raise ValueError(f"beta must be > 0, got {beta}")
    return math.exp(-beta / 2.0), math.sqrt(-math.expm1(-beta))


@dataclass(frozen=True)
class IncrementDistribution:
    """Centered, unit-variance increment law."""

    kind: str

    _KINDS = {
        # kind: (symmetric, finite_support, has_exponential_moment)
        "gaussian": (True, False, True),
        "rademacher": (True, True, True),
        "laplace": (True, False, True),
        "uniform": (True, False, True),
    }
    CODES = {"gaussian": 0, "rademacher": 1, "laplace": 2, "uniform": 3}

    def __post_init__(self):
        if self.kind not in self._KINDS:
            raise ValueError(f"unknown increment distribution {self.kind!r}")

    @property
    def symmetric(self) -> bool:
        return self._KINDS[self.kind][0]

    @property
    def finite_support(self) -> bool:
        return self._KINDS[self.kind][1]

    @property
    def has_exponential_moment(self) -> bool:
        return self._KINDS[self.kind][2]

    @property
    def code(self) -> int:
        return self.CODES[self.kind]

    def support(self) -> list[tuple[float, float]]:
        """(value, probability) atoms; only for finite-support laws."""
        if self.kind == "rademacher":
            return [(-1.0, 0.5), (1.0, 0.5)]
        raise ValueError(f"{self.kind} increments do not have finite support")


DISTRIBUTIONS = tuple(IncrementDistribution._KINDS)


@dataclass(frozen=True)
class WalkSpec:
    weight: WeightFunction
    dist: IncrementDistribution
    barrier: float = 0.0
    horizon: int = 1

    def __post_init__(self):
        if self.horizon < 1:
            raise ValueError(f"horizon must be >= 1, got {self.horizon}")
        if not math.isfinite(self.barrier):
            raise ValueError("barrier must be finite")


def parse_weight(spec: str) -> WeightFunction:
    """Parse ``poly:p=<f>``, ``exp:beta=<f>``, ``const`` or ``table:@<file>``."""
    head, _, rest = spec.partition(":")
    if head == "const" and not rest:
        return WeightFunction.constant()
    if head == "table" and rest.startswith("@"):
        lines = Path(rest[1:]).read_text().split()
        return WeightFunction.from_table(float(v) for v in lines)
    params = _parse_params(rest)
    if head == "poly" and set(params) == {"p"}:
        return WeightFunction.polynomial(params["p"])
    if head == "exp" and set(params) == {"beta"}:
        return WeightFunction.exponential(params["beta"])
    raise ValueError(f"cannot parse weight spec {spec!r}")


def parse_time_change(spec: str) -> TimeChange:
    """Parse ``power:q=``, ``subexp:nu=,alpha=``, ``pwexp:q=``, ``exp:beta=`` or ``sigma:<weight spec>``."""
    head, _, rest = spec.partition(":")
    if head == "sigma":
        return TimeChange.from_sigma(parse_weight(rest))
    params = _parse_params(rest)
    if head == "power" and set(params) == {"q"}:
        return TimeChange.power(params["q"])
    if head == "pwexp" and set(params) == {"q"}:
        return TimeChange.piecewise_exp(params["q"])
    if head == "subexp" and set(params) == {"nu", "alpha"}:
        return TimeChange.subexp(params["nu"], params["alpha"])
    if head == "exp" and set(params) == {"beta"}:
        return TimeChange.exponential(params["beta"])
    raise ValueError(f"cannot parse time change spec {spec!r}")


def _parse_params(text: str) -> dict[str, float]:
    out = {}
    for item in filter(None, text.split(",")):
        key, eq, value = item.partition("=")
        if not eq:
            raise ValueError(f"expected key=value, got {item!r}")
        out[key.strip()] = float(value)
    return out
