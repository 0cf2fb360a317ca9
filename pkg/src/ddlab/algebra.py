"""Partial sums of the weighted norm ``sum_n ||f^(n)||_inf / M_n``."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .calculus import (SeriesFunction, compose_series, differentiate, faa_di_bruno_all,
                       sup_bracket_from_samples, sup_norm)
from .domains import DomainSet, domain as as_domain
from .errors import LengthInsufficientError
from .maps import MapBetween
from .weights import WeightSequence

__all__ = ["DNormProfile", "d_norm_profile", "composed_norm_profile", "profile_verdict",
           "CONVERGENT_RATIO", "DIVERGENT_GROWTH"]

CONVERGENT_RATIO = 0.9
DIVERGENT_GROWTH = 0.05

ENGINES = ("series", "faa_di_bruno")


def _final_quartile_slice(size: int) -> slice:
    return slice(size - max(2, math.ceil(size / 4)), size)


def profile_verdict(terms: np.ndarray) -> str:
    """Trend label computed from the term array alone.

    ``convergent_trend``: the terms end in exact zeros, or every ratio
    ``t[n+1] / t[n]`` in the final quartile is below 0.9.
    ``divergent_trend``: every partial sum in the final quartile exceeds its
    predecessor by more than 5%.  Anything else is ``inconclusive``.
    """
    terms = np.asarray(terms, dtype=float)
    if terms[-1] == 0.0:
        return "convergent_trend"
    tail = terms[_final_quartile_slice(terms.size)]
    if np.all(tail[:-1] > 0) and np.all(tail[1:] / tail[:-1] < CONVERGENT_RATIO):
        return "convergent_trend"
    sums = np.cumsum(terms)
    window = _final_quartile_slice(sums.size)
    prev = sums[window.start - 1:window.stop - 1]
    if window.start >= 1 and np.all(sums[window] > (1 + DIVERGENT_GROWTH) * prev):
        return "divergent_trend"
    return "inconclusive"


@dataclass(frozen=True)
class DNormProfile:
    n: np.ndarray
    terms: np.ndarray
    partial_sums: np.ndarray
    verdict: str
    meta: dict = field(default_factory=dict)

    @property
    def norm(self) -> float:
        """Last partial sum: the norm itself when all later terms vanish."""
        return float(self.partial_sums[-1])

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["n", "term", "partial_sum"])
            for n, t, s in zip(self.n, self.terms, self.partial_sums):
                writer.writerow([int(n), repr(float(t)), repr(float(s))])


def _profile_from_sups(sups: np.ndarray, w: WeightSequence, meta: dict) -> DNormProfile:
    n = np.arange(sups.size)
    terms = np.zeros(sups.size)
    nz = sups > 0
    terms[nz] = np.exp(np.log(sups[nz]) - w.log_values[n[nz]])
    return DNormProfile(n, terms, np.cumsum(terms), profile_verdict(terms), meta)


def d_norm_profile(f: SeriesFunction, w: WeightSequence, X: DomainSet | None = None,
                   n_max: int = 25, k_samples: int = 4096) -> DNormProfile:
    """Terms ``||f^(n)||_inf / M_n`` for ``n = 0 .. n_max`` (upper sup brackets)."""
    if n_max > w.n_top:
        raise LengthInsufficientError(f"n_max={n_max} beyond weight table (N={w.n_top})")
    X = f.domain if X is None else as_domain(X)
    sups = np.zeros(n_max + 1)
    g = f
    for n in range(n_max + 1):
        if g.is_zero():
            break
        sups[n] = sup_norm(g, X, k_samples).upper
        g = differentiate(g, 1)
    return _profile_from_sups(sups, w, {"domain": X.kind, "k_samples": k_samples})


def _faa_di_bruno_sups(f: SeriesFunction, phi: SeriesFunction, X: DomainSet, n_max: int,
                       k_samples: int) -> np.ndarray:
    pts = X.sample(k_samples)
    images = phi.evaluate(pts)
    order = n_max + 1
    phi_derivs, f_derivs = [], []
    dphi, df = phi, f
    for _ in range(order + 1):
        phi_derivs.append(dphi.evaluate(pts))
        f_derivs.append(df.evaluate(images))
        dphi, df = differentiate(dphi, 1), differentiate(df, 1)
    g = faa_di_bruno_all(f_derivs, phi_derivs, order)
    gap = X.max_gap(k_samples)
    return np.array([sup_bracket_from_samples(pts, g[n], g[n + 1], gap).upper
                     for n in range(n_max + 1)])


def composed_norm_profile(f: SeriesFunction, phi: MapBetween, w: WeightSequence,
                          n_max: int = 25, out_degree: int | None = None,
                          engine: str = "series", k_samples: int = 4096) -> DNormProfile:
    """Profile of ``f o phi`` on ``phi.source``.

    ``engine="series"`` composes the series (truncated at ``out_degree``,
    which defaults to the exact composed degree of two Taylor polynomials)
    and profiles the result. ``engine="faa_di_bruno"`` instead evaluates the
    derivatives of the composite on the sample grid by the Bell-polynomial
    chain rule; on polynomials both agree to rounding.
    """
    if engine not in ENGINES:
        raise ValueError(f"derivative engine must be one of {ENGINES}")
    if n_max > w.n_top:
        raise LengthInsufficientError(f"n_max={n_max} beyond weight table (N={w.n_top})")
    X = phi.source
    if out_degree is None:
        if f.basis != "taylor" or phi.phi.basis != "taylor":
            raise ValueError("out_degree is required when a Laurent series is involved")
        out_degree = f.degree * phi.phi.degree
    meta = {"domain": X.kind, "k_samples": k_samples, "out_degree": out_degree, "engine": engine}
    if engine == "series":
        g = compose_series(f, phi.phi, out_degree)
        profile = d_norm_profile(g.with_domain(X) if g.basis == "taylor" else g, w, X, n_max,
                                 k_samples)
        return DNormProfile(profile.n, profile.terms, profile.partial_sums, profile.verdict, meta)
    sups = _faa_di_bruno_sups(f, phi.phi, X, n_max, k_samples)
    return _profile_from_sups(sups, w, meta)
