"""Finite sections of the composition operator ``Tf = f o phi`` and their spectra."""

from __future__ import annotations

import csv
import json
import math
import warnings
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import linalg
from scipy.special import gammaln, logsumexp

from .domains import DomainSet, domain as as_domain
from .errors import (LengthInsufficientError, NoConvergenceError, NotWeightedError,
                     PreconditionError, SpillTooLargeError)
from .maps import MapBetween
from .weights import WeightSequence

__all__ = [
    "OperatorMatrix",
    "FixedPointResult",
    "SpectrumReport",
    "SingularValueProfile",
    "SPILL_TOL",
    "assemble_matrix",
    "eigenvalues",
    "singular_value_profile",
    "log_basis_norms",
    "weighted_normalize",
    "find_fixed_point",
    "spectrum_check",
]

SPILL_TOL = 1e-6
MAX_DENSE = 512


@dataclass(frozen=True)
class OperatorMatrix:
    """Matrix of ``T`` on the monomials ``z**low .. z**(low + N - 1)``.

    Column ``j`` holds the coefficients of ``phi**(low + j)`` inside the
    window; ``spill[j]`` is the l2 norm of what fell outside it.
    """

    entries: np.ndarray
    basis: str
    low: int
    spill: np.ndarray
    domain: DomainSet
    weighted: bool = False
    log_norms: np.ndarray | None = field(default=None, repr=False)

    @property
    def size(self) -> int:
        return self.entries.shape[0]

    @property
    def exponents(self) -> np.ndarray:
        return np.arange(self.low, self.low + self.size)

    def to_json(self) -> dict:
        flat = self.entries.ravel()
        return {
            "basis": self.basis,
            "low": self.low,
            "shape": list(self.entries.shape),
            "weighted": self.weighted,
            "entries": [[float(v.real), float(v.imag)] for v in flat],
            "spill": [float(s) for s in self.spill],
        }

    def dump_json(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh)

    def dump_csv(self, path) -> None:
        """Row-major dump: ``row, col, re, im``."""
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["row", "col", "re", "im"])
            n_rows, n_cols = self.entries.shape
            for i in range(n_rows):
                for j in range(n_cols):
                    v = self.entries[i, j]
                    writer.writerow([i, j, repr(float(v.real)), repr(float(v.imag))])


def _taylor_columns(phi, size: int):
    p = phi.coefficients
    cols = np.zeros((size, size), dtype=complex)
    spill = np.zeros(size)
    power = np.ones(1, dtype=complex)
    for j in range(size):
        if j:
            power = np.convolve(power, p)
        n = min(size, power.size)
        cols[:n, j] = power[:n]
        spill[j] = float(np.linalg.norm(power[size:]))
    return cols, spill


def _laurent_columns(phi, d: int, m: int | None):
    size = 2 * d + 1
    if m is None:
        m = max(10, math.ceil(math.log2(16 * size)))
    n_samples = 1 << m
    z = np.exp(2j * np.pi * np.arange(n_samples) / n_samples)
    values = phi.evaluate(z)
    exps = np.arange(-d, d + 1)
    # negative powers come from sampling 1/phi, never from inverting the series
    powers = np.where(exps[:, None] >= 0, values[None, :], 1.0 / values[None, :]) ** np.abs(exps)[:, None]
    coeffs = np.fft.fft(powers, axis=1) / n_samples
    window = exps % n_samples
    cols = coeffs[:, window].T
    outside = np.ones(n_samples, dtype=bool)
    outside[window] = False
    spill = np.linalg.norm(coeffs[:, outside], axis=1)
    return cols, spill


def assemble_matrix(phi: MapBetween, basis: str | None = None, N: int | None = None,
                    spill_tol: float = SPILL_TOL, m: int | None = None) -> OperatorMatrix:
    """Truncate ``T`` to an ``N x N`` matrix.

    ``basis="taylor"`` uses ``1, z, .., z**(N-1)``. ``basis="laurent"``
    (circle maps only) uses ``z**-d .. z**d`` with ``N = 2d + 1``; the
    columns are obtained from FFTs of sampled powers of ``phi`` on ``2**m``
    points. Raises :class:`SpillTooLargeError` if a column loses l2 mass
    ``>= spill_tol`` to the window.
    """
    if not phi.self_map:
        raise PreconditionError("the operator matrix needs a self-map")
    if basis is None:
        basis = phi.phi.basis
    if N is None or N < 4:
        raise ValueError("N must be at least 4")
    if N > MAX_DENSE:
        raise ValueError(f"N capped at {MAX_DENSE}")
    if basis == "taylor":
        if phi.phi.basis != "taylor":
            raise ValueError("a Laurent map needs the laurent basis")
        cols, spill = _taylor_columns(phi.phi, N)
        low = 0
    elif basis == "laurent":
        if phi.source.kind != "unit_circle":
            raise ValueError("the laurent basis is only available on the unit circle")
        if N % 2 == 0:
            raise ValueError("laurent truncations have odd size N = 2d + 1")
        d = (N - 1) // 2
        cols, spill = _laurent_columns(phi.phi, d, m)
        low = -d
    else:
        raise ValueError(f"unknown basis {basis!r}")
    worst = int(np.argmax(spill))
    if spill[worst] >= spill_tol:
        raise SpillTooLargeError(
            f"column for z^{low + worst} spills {spill[worst]:.3e} >= {spill_tol:.1e}")
    return OperatorMatrix(cols, basis, low, spill, phi.source)


def _sorted_by_modulus(values: np.ndarray) -> np.ndarray:
    values = np.asarray(values, dtype=complex)
    order = np.lexsort((np.round(np.angle(values), 12), -np.round(np.abs(values), 14)))
    return values[order]


def eigenvalues(m: OperatorMatrix | np.ndarray, check: bool = True) -> np.ndarray:
    """Eigenvalues sorted by decreasing modulus (LAPACK Hessenberg-QR).

    With ``check`` every eigenvalue must have ``sigma_min(A - lambda I)``
    below ``1e-8 * ||A||``.
    """
    a = m.entries if isinstance(m, OperatorMatrix) else np.asarray(m, dtype=complex)
    if a.shape[0] > MAX_DENSE:
        raise ValueError(f"N capped at {MAX_DENSE}")
    try:
        lam = linalg.eigvals(a, check_finite=True)
    except linalg.LinAlgError as exc:
        raise NoConvergenceError(f"eigensolver failed: {exc}") from exc
    lam = _sorted_by_modulus(lam)
    if check:
        scale = np.linalg.norm(a, 2)
        eye = np.eye(a.shape[0])
        for value in lam:
            smin = linalg.svdvals(a - value * eye)[-1]
            if smin >= 1e-8 * max(scale, 1e-300):
                raise NoConvergenceError(
                    f"backward error check failed at lambda={value:.6g}: sigma_min={smin:.3e}")
    return lam


@dataclass(frozen=True)
class SingularValueProfile:
    values: np.ndarray
    verdict: str


def singular_value_profile(m: OperatorMatrix) -> SingularValueProfile:
    """Singular values of a weighted truncation with a heuristic compactness label.

    ``compact-consistent``: ``sigma_k < 1e-6 sigma_1`` for some ``k < N/2``.
    ``non-compact-consistent``: ``sigma_{N/2} / sigma_1 > 0.1``.
    """
    if not m.weighted:
        raise NotWeightedError("singular value decay is only meaningful after weighted_normalize")
    s = linalg.svdvals(m.entries)
    half = m.size // 2
    rel = s / s[0]
    if np.any(rel[:half] < 1e-6):
        verdict = "compact-consistent"
    elif rel[half] > 0.1:
        verdict = "non-compact-consistent"
    else:
        verdict = "inconclusive"
    return SingularValueProfile(s, verdict)


def log_basis_norms(exponents, w: WeightSequence, X: DomainSet) -> np.ndarray:
    """``ln ||z**n||_D`` for each exponent (all three sets have ``||z**j||_inf = 1``).

    Non-negative ``n`` give the finite sum ``sum_k n!/(n-k)! / M_k``. Negative
    ``n`` (circle only) give ``sum_k |n|(|n|+1)..(|n|+k-1) / M_k``, summed over
    the whole weight table; the last term must be negligible.
    """
    X = as_domain(X)
    lm = w.log_values
    out = np.empty(len(exponents))
    for i, n in enumerate(np.asarray(exponents)):
        n = int(n)
        if n >= 0:
            if n > w.n_top:
                raise LengthInsufficientError(f"||z^{n}||_D needs M_0..M_{n}")
            k = np.arange(n + 1)
            out[i] = logsumexp(gammaln(n + 1) - gammaln(n - k + 1) - lm[k])
        else:
            if X.kind != "unit_circle":
                raise ValueError("negative powers only exist on the unit circle")
            a = -n
            k = np.arange(w.length)
            terms = gammaln(a + k) - gammaln(a) - lm
            out[i] = logsumexp(terms)
            if terms[-1] - out[i] > math.log(1e-12):
                raise LengthInsufficientError(
                    f"||z^{n}||_D has not converged within the weight table (length {w.length})")
    return out


def weighted_normalize(m: OperatorMatrix, w: WeightSequence, X: DomainSet | None = None) -> OperatorMatrix:
    """Rescale to unit vectors of the weighted basis: ``A_ij ||e_i||_D / ||e_j||_D``.

    This is a diagonal similarity, so eigenvalues are unchanged.
    """
    if m.weighted:
        return m
    X = m.domain if X is None else as_domain(X)
    ln = log_basis_norms(m.exponents, w, X)
    scaled = m.entries * np.exp(ln[:, None] - ln[None, :])
    return replace(m, entries=scaled, weighted=True, log_norms=ln)


@dataclass(frozen=True)
class FixedPointResult:
    x0: complex
    derivative_at_fixed_point: complex
    iterations: int
    residual: float
    roots: tuple = ()

    def to_json(self) -> dict:
        return {
            "x0": [self.x0.real, self.x0.imag],
            "derivative": [self.derivative_at_fixed_point.real, self.derivative_at_fixed_point.imag],
            "iterations": self.iterations,
            "residual": self.residual,
            "distinct_roots": [[r.real, r.imag] for r in self.roots],
        }


def _project(z: complex, X: DomainSet) -> complex:
    if X.kind == "interval_01":
        return complex(min(max(z.real, 0.0), 1.0), 0.0)
    r = abs(z)
    if X.kind == "unit_circle":
        return z / r if r > 0 else 1 + 0j
    return z / r if r > 1 else z


def find_fixed_point(phi: MapBetween, seeds=None, max_iterations: int = 10_000,
                     damping: float = 0.5) -> FixedPointResult:
    """Fixed point of a self-map by damped iteration plus Newton polish.

    Each seed runs ``z <- (1 - damping) z + damping phi(z)`` (projected back
    onto the set), then Newton on ``phi(z) - z``. All converged roots are
    kept; the one with the smallest residual is returned and more than one
    distinct root triggers a warning, since a compact endomorphism has a
    unique fixed point.
    """
    if not phi.self_map:
        raise PreconditionError("fixed points need a self-map")
    X = phi.source
    seeds = X.default_seeds() if seeds is None else np.asarray(seeds, dtype=complex)
    f = phi.phi
    df = f.derivative(1)
    budget = max(1, max_iterations // len(seeds))
    used = 0
    found = []
    for seed in seeds:
        z = _project(complex(seed), X)
        for _ in range(budget):
            used += 1
            nxt = _project((1 - damping) * z + damping * complex(f.evaluate(z)), X)
            if abs(nxt - z) < 1e-14:
                z = nxt
                break
            z = nxt
        for _ in range(100):
            r = complex(f.evaluate(z)) - z
            if r == 0:
                break
            slope = complex(df.evaluate(z)) - 1.0
            if slope == 0:
                break
            step = r / slope
            z = z - step
            if abs(step) < 1e-16:
                break
        residual = abs(complex(f.evaluate(z)) - z)
        if np.isfinite(residual) and residual < 1e-12 and X.distance_to_set(z) < 1e-12:
            found.append((residual, z))
    if not found:
        raise NoConvergenceError(f"no fixed point found from {len(seeds)} seeds", iterations=used)
    roots: list[complex] = []
    for _, z in sorted(found, key=lambda t: (t[0], t[1].real, t[1].imag)):
        if all(abs(z - r) > 1e-8 for r in roots):
            roots.append(z)
    best_residual, x0 = min(found, key=lambda t: (t[0], t[1].real, t[1].imag))
    if len(roots) > 1:
        warnings.warn(f"{len(roots)} distinct fixed points found; a compact endomorphism "
                      "has exactly one", RuntimeWarning, stacklevel=2)
    return FixedPointResult(complex(x0), complex(df.evaluate(x0)), used, float(best_residual),
                            tuple(complex(r) for r in roots))


@dataclass(frozen=True)
class SpectrumReport:
    predicted: np.ndarray         # 1, lambda, .., lambda**k  (0 handled by the noise floor)
    computed: np.ndarray
    pairs: list                   # (predicted, computed, distance) for the top k + 1
    extended_pairs: list          # same for lambda**n, n > k, above the noise floor
    unmatched: np.ndarray
    zero_matched: int
    tol: float
    fixed_point: FixedPointResult
    meta: dict = field(default_factory=dict)

    @property
    def max_distance(self) -> float:
        return max((p[2] for p in self.pairs), default=0.0)

    @property
    def ok(self) -> bool:
        return self.unmatched.size == 0

    def to_json(self) -> dict:
        c = lambda v: [float(np.real(v)), float(np.imag(v))]  # noqa: E731
        return {
            "fixed_point": self.fixed_point.to_json(),
            "predicted": [c(v) for v in self.predicted] + [[0.0, 0.0]],
            "pairs": [{"predicted": c(p), "computed": c(q), "distance": float(dist)}
                      for p, q, dist in self.pairs],
            "extended_pairs": len(self.extended_pairs),
            "max_extended_distance": max((p[2] for p in self.extended_pairs), default=0.0),
            "max_distance": self.max_distance,
            "unmatched": [c(v) for v in self.unmatched],
            "matched_to_zero": self.zero_matched,
            "tol": self.tol,
            **self.meta,
        }

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["predicted_re", "predicted_im", "computed_re", "computed_im", "distance"])
            for p, q, dist in self.pairs + self.extended_pairs:
                writer.writerow([repr(float(p.real)), repr(float(p.imag)),
                                 repr(float(q.real)), repr(float(q.imag)), repr(float(dist))])


def _greedy_match(targets, pool: list, radius=None) -> list:
    """Pop the nearest pool entry for each target; ``radius(t)`` optionally caps the distance."""
    pairs = []
    for t in targets:
        if not pool:
            break
        j = min(range(len(pool)), key=lambda i: (abs(pool[i] - t), i))
        if radius is not None and abs(pool[j] - t) > radius(t):
            continue
        q = pool.pop(j)
        pairs.append((complex(t), q, abs(q - t)))
    return pairs


def spectrum_check(phi: MapBetween, w: WeightSequence, N: int, k: int = 5, tol: float = 1e-10,
                   *, force: bool = False, diagnosis=None, basis: str | None = None,
                   spill_tol: float = SPILL_TOL) -> SpectrumReport:
    """Compare the truncated spectrum with ``{phi'(x0)**n} U {0, 1}``.

    The predicted values ``1, lambda, .., lambda**k`` are matched greedily,
    in order of decreasing modulus, to the nearest unused computed
    eigenvalue. Computed eigenvalues of modulus ``<= tol`` count as matched
    to the accumulation point 0; the remaining ones are matched against
    ``lambda**n`` for ``n > k`` and whatever is left over is reported as
    unmatched. Without ``force`` the map must first be classified compact.
    """
    if not force:
        if diagnosis is None:
            from .criteria import classify
            diagnosis = classify(phi, w)
        if not diagnosis.is_compact:
            raise PreconditionError(
                f"classification is {diagnosis.conclusion!r}; pass force=True to override")
    fp = find_fixed_point(phi)
    lam = fp.derivative_at_fixed_point
    m = weighted_normalize(assemble_matrix(phi, basis, N, spill_tol=spill_tol), w)
    computed = eigenvalues(m)

    predicted = np.array([lam ** n for n in range(k + 1)], dtype=complex)
    predicted[0] = 1.0
    pool = [complex(v) for v in computed]
    pairs = _greedy_match(predicted, pool)
    zero_matched = sum(1 for v in pool if abs(v) <= tol)
    pool = [v for v in pool if abs(v) > tol]
    extended = []
    n = k + 1
    while abs(lam) > 0 and abs(lam) ** n > tol and pool and n < 10_000:
        extended.append(lam ** n)
        n += 1
    # neighbours lambda**n and lambda**(n+1) are |lambda**n| |1 - lambda| apart
    extended_pairs = _greedy_match(extended, pool,
                                   lambda t: max(tol, 0.5 * abs(t) * abs(1 - lam)))
    unmatched = np.array(pool, dtype=complex)
    meta = {"N": m.size, "basis": m.basis, "max_spill": float(m.spill.max()), "k": k}
    return SpectrumReport(predicted, computed, pairs, extended_pairs, unmatched, zero_matched, tol,
                          fp, meta)
