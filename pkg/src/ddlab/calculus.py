"""Truncated Taylor / Laurent series and the calculus the lab needs on them."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .domains import CIRCLE, DISC, DomainSet, domain as as_domain
from .errors import BasisMismatchError, InsufficientDerivativesError, TailTooLargeError

__all__ = [
    "SeriesFunction",
    "SupBracket",
    "AnalyticityIndex",
    "differentiate",
    "sup_norm",
    "sup_bracket_from_samples",
    "compose_series",
    "faa_di_bruno",
    "faa_di_bruno_all",
    "bell_polynomials",
    "analyticity_index",
    "fourier_coefficients",
    "TAIL_TOL",
]

TAIL_TOL = 1e-10


@dataclass(frozen=True)
class SeriesFunction:
    """A finite Taylor or Laurent expansion living on a :class:`DomainSet`.

    ``coefficients[i]`` multiplies ``z**(low + i)``.  Taylor series always
    have ``low == 0``; Laurent series are only allowed on the unit circle.
    """

    coefficients: np.ndarray
    domain: DomainSet = field(default=DISC)
    basis: str = "taylor"
    low: int = 0

    def __post_init__(self):
        c = np.atleast_1d(np.array(self.coefficients, dtype=complex))
        if c.ndim != 1 or c.size == 0:
            raise ValueError("coefficients must be a non-empty 1-d array")
        c.setflags(write=False)
        object.__setattr__(self, "coefficients", c)
        object.__setattr__(self, "domain", as_domain(self.domain))
        if self.basis not in ("taylor", "laurent"):
            raise ValueError(f"unknown basis {self.basis!r}")
        if self.basis == "taylor" and self.low != 0:
            raise ValueError("taylor series start at degree 0")
        if self.basis == "laurent" and self.domain.kind != "unit_circle":
            raise BasisMismatchError("laurent series are only defined on the unit circle")
        object.__setattr__(self, "low", int(self.low))

    @classmethod
    def taylor(cls, coefficients, domain=DISC) -> "SeriesFunction":
        return cls(coefficients, as_domain(domain), "taylor", 0)

    @classmethod
    def laurent(cls, coefficients, low: int) -> "SeriesFunction":
        return cls(coefficients, CIRCLE, "laurent", low)

    @classmethod
    def from_terms(cls, terms: dict, domain=CIRCLE) -> "SeriesFunction":
        """Build from ``{exponent: coefficient}``; Laurent iff an exponent is negative."""
        lo, hi = min(terms), max(terms)
        if lo >= 0:
            c = np.zeros(hi + 1, dtype=complex)
            for k, v in terms.items():
                c[k] = v
            return cls.taylor(c, domain)
        c = np.zeros(hi - lo + 1, dtype=complex)
        for k, v in terms.items():
            c[k - lo] = v
        return cls.laurent(c, lo)

    @property
    def high(self) -> int:
        return self.low + self.coefficients.size - 1

    @property
    def degree(self) -> int:
        return self.high

    @property
    def exponents(self) -> np.ndarray:
        return np.arange(self.low, self.high + 1)

    def coefficient(self, k: int) -> complex:
        i = k - self.low
        if 0 <= i < self.coefficients.size:
            return complex(self.coefficients[i])
        return 0j

    def evaluate(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        acc = np.zeros_like(z)
        for c in self.coefficients[::-1]:
            acc = acc * z + c
        if self.low:
            acc = acc * z ** self.low
        return acc

    __call__ = evaluate

    def derivative(self, n: int = 1) -> "SeriesFunction":
        return differentiate(self, n)

    def with_domain(self, domain) -> "SeriesFunction":
        return SeriesFunction(self.coefficients, as_domain(domain), self.basis, self.low)

    def __mul__(self, other):
        if isinstance(other, SeriesFunction):
            if self.domain != other.domain:
                raise BasisMismatchError("cannot multiply series on different domains")
            basis = "laurent" if "laurent" in (self.basis, other.basis) else "taylor"
            return SeriesFunction(np.convolve(self.coefficients, other.coefficients),
                                  self.domain, basis, self.low + other.low)
        return SeriesFunction(self.coefficients * other, self.domain, self.basis, self.low)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not np.any(self.coefficients)

    def to_json(self) -> dict:
        return {
            "basis": self.basis,
            "low": self.low,
            "domain": self.domain.kind,
            "coefficients": [[float(c.real), float(c.imag)] for c in self.coefficients],
        }

    @classmethod
    def from_json(cls, data: dict) -> "SeriesFunction":
        coeffs = [complex(re, im) for re, im in data["coefficients"]]
        return cls(coeffs, as_domain(data.get("domain", "closed_unit_disc")),
                   data.get("basis", "taylor"), data.get("low", 0))


def differentiate(f: SeriesFunction, n: int = 1) -> SeriesFunction:
    """n-th complex derivative, term by term.

    Taylor series lose their constant term at every step (a polynomial of
    degree d becomes one of degree d - 1, eventually the zero series);
    Laurent series keep their number of coefficients and shift ``low`` down.
    """
    if n < 0:
        raise ValueError("derivative order must be non-negative")
    c = f.coefficients
    low = f.low
    for _ in range(n):
        c = c * np.arange(low, low + c.size)
        if f.basis == "taylor":
            c = c[1:] if c.size > 1 else np.zeros(1, dtype=complex)
        else:
            low -= 1
    return SeriesFunction(c, f.domain, f.basis, low)


class SupBracket(NamedTuple):
    lower: float
    upper: float
    argmax: complex


def sup_bracket_from_samples(points, values, derivative_values, gap: float) -> SupBracket:
    """Bracket ``sup |f|`` from samples of ``f`` and ``f'``.

    Every point of the set lies within ``gap / 2`` of a sample, so the upper
    end adds ``max|f'| * gap / 2`` (with ``max|f'|`` itself sampled, which
    makes the bound heuristic rather than rigorous).
    """
    mags = np.abs(values)
    lower = float(mags.max())
    # first sample within rounding of the max, so symmetric peaks resolve deterministically
    i = int(np.argmax(mags >= lower * (1 - 1e-12)))
    lip = float(np.max(np.abs(derivative_values)))
    return SupBracket(lower, lower + lip * gap / 2.0, complex(points[i]))


def sup_norm(f: SeriesFunction, X: DomainSet | None = None, k_samples: int = 4096) -> SupBracket:
    """Lower/upper bracket of ``||f||_inf`` over ``X`` (default: ``f.domain``)."""
    if k_samples < 64:
        raise ValueError("k_samples must be at least 64")
    X = f.domain if X is None else as_domain(X)
    pts = X.sample(k_samples)
    return sup_bracket_from_samples(pts, f.evaluate(pts), differentiate(f, 1).evaluate(pts),
                                    X.max_gap(k_samples))


def _truncated_taylor_compose(f: SeriesFunction, phi: SeriesFunction, out_degree: int) -> np.ndarray:
    size = out_degree + 1
    p = phi.coefficients[:size]
    acc = np.zeros(1, dtype=complex)
    for c in f.coefficients[::-1]:
        acc = np.convolve(acc, p)[:size]
        acc[0] += c
    out = np.zeros(size, dtype=complex)
    out[:acc.size] = acc
    return out


def compose_series(f: SeriesFunction, phi: SeriesFunction, out_degree: int,
                   *, tail_tol: float = TAIL_TOL) -> SeriesFunction:
    """Series of ``f o phi`` truncated to ``out_degree``.

    Two Taylor series compose by Horner's scheme with truncation at every
    step. As soon as a Laurent series is involved both must live on the unit
    circle; ``f(phi(z))`` is then sampled and transformed back with
    :func:`fourier_coefficients`, which is exact for Laurent polynomials
    whose composed span fits the grid and otherwise enforces ``tail_tol``.
    """
    if f.basis == "taylor" and phi.basis == "taylor":
        return SeriesFunction.taylor(_truncated_taylor_compose(f, phi, out_degree), phi.domain)
    if phi.domain.kind != "unit_circle":
        raise BasisMismatchError("laurent composition needs phi to be a map on the unit circle")
    reach = max(abs(f.low), abs(f.high)) * max(abs(phi.low), abs(phi.high), 1)
    size = 1 << max(10, math.ceil(math.log2(4 * max(out_degree, reach) + 4)))
    size = min(size, 1 << 18)
    theta = 2.0 * np.pi * np.arange(size) / size
    values = f.evaluate(phi.evaluate(np.exp(1j * theta)))
    return fourier_coefficients(values, out_degree, tail_tol=tail_tol)


def fourier_coefficients(values, d: int, *, tail_tol: float = TAIL_TOL) -> SeriesFunction:
    """Laurent series ``z**-d .. z**d`` from samples at ``2**m`` uniform angles.

    Raises :class:`TailTooLargeError` if any discarded coefficient
    (``|k| > d``) has modulus ``>= tail_tol``.
    """
    values = np.asarray(values, dtype=complex)
    size = values.size
    if size & (size - 1) or size < 4 * d + 4:
        raise ValueError(f"need 2**m >= 4d+4 samples, got {size} for d={d}")
    if not np.all(np.isfinite(values)):
        raise ValueError("samples must be finite")
    c = np.fft.fft(values) / size
    k = np.arange(-d, d + 1)
    kept = c[k % size]
    tail = c[d + 1:size - d]
    worst = float(np.max(np.abs(tail))) if tail.size else 0.0
    if worst >= tail_tol:
        raise TailTooLargeError(f"discarded Fourier tail {worst:.3e} >= {tail_tol:.1e}; increase d")
    return SeriesFunction.laurent(kept, -d)


def bell_polynomials(n: int, x) -> list[list]:
    """Partial exponential Bell polynomials ``B[j][k](x_1, ..., x_{j-k+1})``.

    ``x[i]`` holds ``x_i`` for ``i = 1 .. n`` (``x[0]`` is ignored). Entries
    may be arrays, in which case everything is evaluated elementwise.
    Uses ``B[j][k] = sum_i C(j-1, i-1) x_i B[j-i][k-1]``.
    """
    one = np.ones_like(np.asarray(x[1] if n >= 1 else 1.0, dtype=complex))
    B = [[0 * one for _ in range(n + 1)] for _ in range(n + 1)]
    B[0][0] = one
    binom = [[math.comb(j, i) for i in range(j + 1)] for j in range(n + 1)]
    for j in range(1, n + 1):
        for k in range(1, j + 1):
            acc = 0 * one
            for i in range(1, j - k + 2):
                acc = acc + binom[j - 1][i - 1] * x[i] * B[j - i][k - 1]
            B[j][k] = acc
    return B


def faa_di_bruno_all(f_derivs, phi_derivs, n: int) -> list:
    """All derivatives ``(f o phi)^(j)(a)`` for ``j = 0 .. n``.

    ``f_derivs[k] = f^(k)(phi(a))`` and ``phi_derivs[k] = phi^(k)(a)`` for
    ``k = 0 .. n``; each entry may be a scalar or an array of sample values.
    """
    if len(f_derivs) < n + 1 or len(phi_derivs) < n + 1:
        raise InsufficientDerivativesError(
            f"order {n} needs derivatives 0..{n} of both f and phi "
            f"(got {len(f_derivs)} and {len(phi_derivs)})")
    B = bell_polynomials(n, phi_derivs)
    out = [np.asarray(f_derivs[0], dtype=complex)]
    for j in range(1, n + 1):
        acc = 0 * out[0]
        for k in range(1, j + 1):
            acc = acc + f_derivs[k] * B[j][k]
        out.append(acc)
    return out


def faa_di_bruno(f_derivs, phi_derivs, n: int):
    """``(f o phi)^(n)(a)`` as a sum of ``f^(k)(phi(a)) * B_{n,k}(phi'(a), ...)``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    result = faa_di_bruno_all(f_derivs, phi_derivs, n)[n]
    return result.item() if np.ndim(result) == 0 else result


class AnalyticityIndex(NamedTuple):
    k: np.ndarray
    values: np.ndarray
    maximum: float


def analyticity_index(phi: SeriesFunction, X: DomainSet | None = None, k_max: int = 20,
                      k_samples: int = 4096) -> AnalyticityIndex:
    """``b_k = (||phi^(k)||_inf / k!)**(1/k)`` for ``k = 1 .. k_max``.

    The sup norms are upper brackets; vanishing derivatives give ``b_k = 0``.
    A map is analytic when ``sup_k b_k`` is finite; only the window up to
    ``k_max`` is inspected.
    """
    if k_max < 1:
        raise ValueError("k_max must be at least 1")
    X = phi.domain if X is None else as_domain(X)
    ks = np.arange(1, k_max + 1)
    b = np.zeros(k_max)
    d = phi
    for i, k in enumerate(ks):
        d = differentiate(d, 1)
        upper = sup_norm(d, X, k_samples).upper if not d.is_zero() else 0.0
        if upper > 0:
            b[i] = math.exp((math.log(upper) - math.lgamma(k + 1)) / k)
    return AnalyticityIndex(ks, b, float(b.max()))
