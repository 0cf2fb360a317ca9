"""Weight sequences (M_n) stored as natural logarithms.

Everything here works on ``log_values``; the raw weights overflow double
precision long before the tables used by the lab end (``50!**1.5`` is
already past ``1e96``, ``200!**2`` past ``1e700``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from .errors import DegenerateWeightError, LengthInsufficientError

__all__ = [
    "WeightSequence",
    "log_factorial",
    "log_binomial",
    "AdmissibilityReport",
    "Profile",
    "OrderEstimate",
    "validate_admissibility",
    "non_analyticity_profile",
    "ratio_profile",
    "entire_order_estimate",
    "weight_from_spec",
]

ADMISSIBILITY_SLACK = 1e-9

_LOG_FACTORIAL_CACHE = np.zeros(1)


def log_factorial(n) -> np.ndarray:
    """``ln(n!)`` by summing ``ln k``; prefix sums are cached and extended on demand."""
    global _LOG_FACTORIAL_CACHE
    n_arr = np.asarray(n, dtype=np.int64)
    top = int(n_arr.max()) if n_arr.size else 0
    if top >= _LOG_FACTORIAL_CACHE.size:
        size = max(top + 1, 10_001)
        table = np.zeros(size)
        table[1:] = np.cumsum(np.log(np.arange(1, size, dtype=float)))
        table.setflags(write=False)
        _LOG_FACTORIAL_CACHE = table
    return _LOG_FACTORIAL_CACHE[n_arr]


def log_binomial(n, k) -> np.ndarray:
    n = np.asarray(n)
    k = np.asarray(k)
    return log_factorial(n) - log_factorial(k) - log_factorial(n - k)


@dataclass(frozen=True)
class WeightSequence:
    """Table of ``ln M_0 .. ln M_N`` together with how it was generated.

    Use the ``factorial_power``/``tabulated``/``closed_form`` constructors
    rather than building one by hand.
    """

    log_values: np.ndarray
    generator: dict = field(default_factory=lambda: {"kind": "tabulated"})

    def __post_init__(self):
        lv = np.array(self.log_values, dtype=float)
        if lv.ndim != 1 or lv.size < 2:
            raise ValueError("a weight table needs at least M_0 and M_1")
        if not np.all(np.isfinite(lv)):
            raise ValueError("weight table contains non-finite log values")
        if lv[0] != 0.0:
            raise ValueError(f"M_0 must be 1 (got log M_0 = {lv[0]!r})")
        lv.setflags(write=False)
        object.__setattr__(self, "log_values", lv)
        object.__setattr__(self, "generator", dict(self.generator))

    @classmethod
    def factorial_power(cls, gamma: float, length: int = 256) -> "WeightSequence":
        """``M_n = (n!)**gamma`` for ``n = 0 .. length - 1``."""
        n = np.arange(length)
        return cls(gamma * log_factorial(n), {"kind": "factorial_power", "gamma": float(gamma)})

    @classmethod
    def tabulated(cls, values=None, *, log_values=None) -> "WeightSequence":
        if (values is None) == (log_values is None):
            raise ValueError("pass exactly one of values / log_values")
        if values is not None:
            values = np.asarray(values, dtype=float)
            if np.any(values <= 0):
                raise ValueError("weights must be positive")
            log_values = np.log(values)
        return cls(np.asarray(log_values, dtype=float), {"kind": "tabulated"})

    @classmethod
    def closed_form(cls, name: str, log_fn: Callable[[np.ndarray], np.ndarray],
                    length: int = 256) -> "WeightSequence":
        """Weights from a vectorised ``n -> ln M_n``; ``name`` is kept as metadata only."""
        return cls(np.asarray(log_fn(np.arange(length)), dtype=float),
                   {"kind": "custom", "name": name})

    @property
    def length(self) -> int:
        return self.log_values.size

    @property
    def n_top(self) -> int:
        """Largest index covered by the table."""
        return self.log_values.size - 1

    def log(self, n) -> np.ndarray:
        return self.log_values[np.asarray(n)]

    def to_spec(self) -> dict:
        spec = dict(self.generator)
        if spec["kind"] == "factorial_power":
            spec["length"] = self.length
        elif spec["kind"] == "tabulated":
            spec["log_values"] = self.log_values.tolist()
        return spec


def weight_from_spec(spec: dict) -> WeightSequence:
    """Build a weight sequence from a scenario entry such as
    ``{"kind": "factorial_power", "gamma": 1.5}``."""
    kind = spec.get("kind")
    if kind == "factorial_power":
        return WeightSequence.factorial_power(float(spec["gamma"]), int(spec.get("length", 256)))
    if kind == "tabulated":
        if "log_values" in spec:
            return WeightSequence.tabulated(log_values=spec["log_values"])
        return WeightSequence.tabulated(spec["values"])
    raise ValueError(f"unknown weight kind {kind!r}")


# -- profiles -----------------------------------------------------------------

def _final_quartile(seq: np.ndarray) -> np.ndarray:
    return seq[-max(2, math.ceil(seq.size / 4)):]


def _first_quartile(seq: np.ndarray) -> np.ndarray:
    return seq[:max(1, math.ceil(seq.size / 4))]


class AdmissibilityReport(NamedTuple):
    passed: bool
    first_failure: tuple[int, int] | None
    min_margin: float
    min_margin_at: tuple[int, int]
    margins: np.ndarray  # margins[n, m], NaN where n + m > n_max


def validate_admissibility(w: WeightSequence, n_max: int) -> AdmissibilityReport:
    """Check ``M_{n+m} / (M_n M_m) >= C(n+m, n)`` for all ``n + m <= n_max``.

    The comparison is done on logarithms with an absolute slack of 1e-9.
    Failures are searched in order of increasing ``n + m``, then ``n``.
    """
    if 2 * n_max > w.n_top:
        raise LengthInsufficientError(
            f"admissibility up to n_max={n_max} needs at least {2 * n_max + 1} weights, "
            f"table has {w.length}")
    n = np.arange(n_max + 1)
    nn, mm = np.meshgrid(n, n, indexing="ij")
    inside = nn + mm <= n_max
    total = np.where(inside, nn + mm, 0)
    lv = w.log_values
    margins = lv[total] - lv[nn] - lv[mm] - log_binomial(total, np.where(inside, nn, 0))
    margins = np.where(inside, margins, np.nan)

    first_failure = None
    for s in range(n_max + 1):
        bad = [k for k in range(s + 1) if margins[k, s - k] < -ADMISSIBILITY_SLACK]
        if bad:
            first_failure = (bad[0], s - bad[0])
            break
    flat = np.nanargmin(margins)
    at = tuple(int(i) for i in np.unravel_index(flat, margins.shape))
    return AdmissibilityReport(first_failure is None, first_failure,
                               float(margins[at]), at, margins)


class Profile(NamedTuple):
    """A finite sequence indexed by ``n`` plus a heuristic verdict about its limit."""

    n: np.ndarray
    values: np.ndarray
    verdict: str


def non_analyticity_profile(w: WeightSequence, n_max: int) -> Profile:
    """``a_n = (n!/M_n)**(1/n)`` for ``n = 1 .. n_max``.

    Verdict is ``"non-analytic trend"`` when the final quartile is strictly
    decreasing and ends below 0.5, otherwise ``"not non-analytic"``.
    """
    if n_max > w.n_top:
        raise LengthInsufficientError(f"n_max={n_max} beyond weight table (N={w.n_top})")
    n = np.arange(1, n_max + 1)
    a = np.exp((log_factorial(n) - w.log_values[n]) / n)
    tail = _final_quartile(a)
    trending = bool(np.all(np.diff(tail) < 0) and a[-1] < 0.5)
    return Profile(n, a, "non-analytic trend" if trending else "not non-analytic")


RATIO_FLAT_SPREAD = 0.10
RATIO_GROWTH_FACTOR = 1.5


def ratio_profile(w: WeightSequence, n_max: int) -> Profile:
    """``r_n = n**2 M_n / M_{n+1}`` for ``n = 1 .. n_max``.

    ``"bounded trend"`` when the final quartile spreads by less than 10% of
    its maximum; ``"divergent trend"`` when it is strictly increasing and its
    last value exceeds 1.5 times the first-quartile maximum; otherwise
    ``"inconclusive"``.
    """
    if n_max + 1 > w.n_top:
        raise LengthInsufficientError(f"ratio profile to n_max={n_max} needs M_{n_max + 1}")
    n = np.arange(1, n_max + 1)
    lv = w.log_values
    r = np.exp(2 * np.log(n) + lv[n] - lv[n + 1])
    tail = _final_quartile(r)
    if (tail.max() - tail.min()) < RATIO_FLAT_SPREAD * tail.max():
        verdict = "bounded trend"
    elif np.all(np.diff(tail) > 0) and r[-1] > RATIO_GROWTH_FACTOR * _first_quartile(r).max():
        verdict = "divergent trend"
    else:
        verdict = "inconclusive"
    return Profile(n, r, verdict)


class OrderEstimate(NamedTuple):
    order: float
    n: np.ndarray
    ratio_form: np.ndarray        # ln n / ln(M_n / M_{n-1})
    coefficient_form: np.ndarray  # n ln n / ln M_n


def entire_order_estimate(w: WeightSequence, n_max: int) -> OrderEstimate:
    """Estimate the order of ``g(z) = sum z**n / M_n``.

    Two classical coefficient formulas are tabulated for ``n = 2 .. n_max``.
    The reported order is the maximum of the ratio form
    ``ln n / ln(M_n / M_{n-1})`` over the final quartile; the
    ``n ln n / ln M_n`` form converges to the same limit but only like
    ``1 / ln n``, so it is returned for inspection only.
    """
    if n_max > w.n_top:
        raise LengthInsufficientError(f"n_max={n_max} beyond weight table (N={w.n_top})")
    if n_max < 20:
        raise LengthInsufficientError("order estimation needs n_max >= 20")
    n = np.arange(2, n_max + 1)
    lv = w.log_values
    window = _final_quartile(n)
    if np.any(lv[window] <= 0) or np.any(lv[window] - lv[window - 1] <= 0):
        raise DegenerateWeightError("M_n <= 1 or non-increasing inside the estimation window")
    with np.errstate(divide="ignore", invalid="ignore"):
        coefficient_form = n * np.log(n) / lv[n]
        ratio_form = np.log(n) / (lv[n] - lv[n - 1])
    order = float(np.max(ratio_form[-window.size:]))
    return OrderEstimate(order, n, ratio_form, coefficient_form)

