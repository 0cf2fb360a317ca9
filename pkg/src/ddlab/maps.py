"""Maps between model sets and the built-in map families."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .calculus import SeriesFunction, fourier_coefficients
from .domains import DISC, INTERVAL, DomainSet, domain as as_domain
from .errors import ConfigError, ContainmentError

__all__ = [
    "MapBetween",
    "CONTAINMENT_TOL",
    "affine",
    "monomial",
    "identity",
    "wermer_circle",
    "counterexample_interval",
    "gadget_disc",
    "gadget_circle",
    "explicit",
    "map_from_spec",
    "FAMILIES",
]

CONTAINMENT_TOL = 1e-8


@dataclass(frozen=True)
class MapBetween:
    """``phi: source -> target`` with its image checked on a sample grid."""

    phi: SeriesFunction
    source: DomainSet
    target: DomainSet
    name: str = "explicit"
    params: tuple = ()
    containment_tol: float = CONTAINMENT_TOL
    check_samples: int = 1024

    def __post_init__(self):
        object.__setattr__(self, "source", as_domain(self.source))
        object.__setattr__(self, "target", as_domain(self.target))
        pts = self.source.grid(self.check_samples)
        dist = self.target.distance_to_set(self.phi.evaluate(pts))
        worst = int(np.argmax(dist))
        if dist[worst] > self.containment_tol:
            raise ContainmentError(
                f"{self.name}: phi({pts[worst]:.6g}) lies {dist[worst]:.3e} outside {self.target.kind}")

    @property
    def self_map(self) -> bool:
        return self.source == self.target

    @property
    def derivative(self) -> SeriesFunction:
        return self.phi.derivative(1)

    def __call__(self, z):
        return self.phi.evaluate(z)

    def describe(self) -> dict:
        return {"family": self.name, **dict(self.params), "source": self.source.kind,
                "target": self.target.kind}


def _self_map(phi: SeriesFunction, name: str, **params) -> MapBetween:
    return MapBetween(phi, phi.domain, phi.domain, name, tuple(sorted(params.items())))


def affine(alpha: complex, beta: complex = 0.0, domain=DISC) -> MapBetween:
    """``z -> alpha z + beta``."""
    X = as_domain(domain)
    return _self_map(SeriesFunction.taylor([beta, alpha], X), "affine", alpha=alpha, beta=beta)


def monomial(power: int, coefficient: complex = 1.0, domain=DISC) -> MapBetween:
    """``z -> coefficient * z**power``."""
    c = np.zeros(power + 1, dtype=complex)
    c[power] = coefficient
    X = as_domain(domain)
    return _self_map(SeriesFunction.taylor(c, X), "monomial", power=power, coefficient=coefficient)


def identity(domain=DISC) -> MapBetween:
    return _self_map(SeriesFunction.taylor([0.0, 1.0], as_domain(domain)), "identity")


def wermer_series(c: float, d: int = 40, m: int = 10) -> SeriesFunction:
    """Laurent truncation of ``exp(c (z**2 - 1) / z)`` on the unit circle."""
    size = 1 << m
    z = np.exp(2j * np.pi * np.arange(size) / size)
    return fourier_coefficients(np.exp(c * (z - 1.0 / z)), d)


def wermer_circle(c: float, d: int = 40, m: int = 10) -> MapBetween:
    """Circle self-map ``exp(c (z**2 - 1) / z)``; fixes 1 with ``|phi'(1)| = 2|c|``."""
    return _self_map(wermer_series(c, d, m), "wermer_circle", c=c)


def counterexample_interval() -> MapBetween:
    """``x -> (1 + x**2) / 2`` on [0, 1]: touches 1 with slope exactly 1."""
    return _self_map(SeriesFunction.taylor([0.5, 0.0, 0.5], INTERVAL), "counterexample_interval")


def gadget_disc(C: float) -> MapBetween:
    """``z -> (z + C) / (1 + C)``, a disc self-map with derivative ``1/(1+C) < 1``."""
    if not C > 0:
        raise ValueError("C must be positive")
    return _self_map(SeriesFunction.taylor([C / (1 + C), 1 / (1 + C)], DISC), "gadget_disc", C=C)


def gadget_circle(A: float, d: int = 40, m: int = 10) -> MapBetween:
    """``z -> exp((z**2 - 1) / (2 A z))`` on the circle; ``||phi'|| = 1/A``."""
    if not A > 1:
        raise ValueError("A must exceed 1")
    return _self_map(wermer_series(1.0 / (2.0 * A), d, m), "gadget_circle", A=A)


def explicit(coefficients, domain=DISC, low: int = 0, target=None) -> MapBetween:
    """A map given by its coefficients (``[re, im]`` pairs or numbers)."""
    coeffs = [complex(*c) if isinstance(c, (list, tuple)) else complex(c) for c in coefficients]
    X = as_domain(domain)
    if low < 0:
        phi = SeriesFunction.laurent(coeffs, low)
    else:
        phi = SeriesFunction.taylor([0.0] * low + coeffs, X)
    Y = X if target is None else as_domain(target)
    return MapBetween(phi, X, Y, "explicit")


FAMILIES = ("affine", "monomial", "identity", "wermer_circle", "counterexample_interval",
            "gadget_disc", "gadget_circle", "explicit")


def _number(value, name):
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(*value)
    if isinstance(value, (int, float, complex)):
        return value
    raise ConfigError(f"expected a number or [re, im] pair, got {value!r}", name)


def map_from_spec(spec: dict, domain_kind=None) -> MapBetween:
    """Instantiate a map from a scenario entry, e.g. ``{"family": "wermer_circle", "c": 0.2}``."""
    family = spec.get("family")
    X = as_domain(domain_kind) if domain_kind is not None else None
    try:
        if family == "affine":
            return affine(_number(spec.get("alpha", 0.5), "map.alpha"),
                          _number(spec.get("beta", 0.0), "map.beta"), X or DISC)
        if family == "monomial":
            return monomial(int(spec.get("power", 2)),
                            _number(spec.get("coefficient", 1.0), "map.coefficient"), X or DISC)
        if family == "identity":
            return identity(X or DISC)
        if family == "wermer_circle":
            return wermer_circle(float(spec["c"]), int(spec.get("d", 40)), int(spec.get("m", 10)))
        if family == "counterexample_interval":
            return counterexample_interval()
        if family == "gadget_disc":
            return gadget_disc(float(spec["C"]))
        if family == "gadget_circle":
            return gadget_circle(float(spec["A"]), int(spec.get("d", 40)), int(spec.get("m", 10)))
        if family == "explicit":
            return explicit(spec["coefficients"], X or DISC, int(spec.get("low", 0)),
                            spec.get("target"))
    except KeyError as exc:
        raise ConfigError("missing parameter", f"map.{exc.args[0]}") from None
    raise ConfigError(f"unknown family {family!r}; choose one of {', '.join(FAMILIES)}", "map.family")

