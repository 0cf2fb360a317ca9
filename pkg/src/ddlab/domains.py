"""The three model sets: [0, 1], the closed unit disc and the unit circle."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["DomainSet", "INTERVAL", "DISC", "CIRCLE", "domain"]

_ALIASES = {
    "interval_01": "interval_01",
    "interval": "interval_01",
    "closed_unit_disc": "closed_unit_disc",
    "disc": "closed_unit_disc",
    "unit_circle": "unit_circle",
    "circle": "unit_circle",
}


@dataclass(frozen=True)
class DomainSet:
    kind: str
    boundary_margin: float = 1e-6

    def __post_init__(self):
        try:
            object.__setattr__(self, "kind", _ALIASES[self.kind])
        except KeyError:
            raise ValueError(f"unknown domain kind {self.kind!r}") from None
        if not self.boundary_margin > 0:
            raise ValueError("boundary_margin must be positive")

    @property
    def has_interior(self) -> bool:
        """Whether the set has nonempty interior as a subset of the plane."""
        return self.kind == "closed_unit_disc"

    def sample(self, k: int) -> np.ndarray:
        """Points where a sup norm is sampled.

        Chebyshev-Lobatto points on [0, 1]; ``k`` uniform angles on the unit
        circle for both the circle and the disc (the disc only ever carries
        power series, whose modulus peaks on the boundary).
        """
        if self.kind == "interval_01":
            j = np.arange(k)
            x = 0.5 * (1.0 - np.cos(np.pi * j / (k - 1)))
            return x.astype(complex)
        theta = 2.0 * np.pi * np.arange(k) / k
        return np.exp(1j * theta)

    def max_gap(self, k: int) -> float:
        """Largest distance, measured inside the set, between neighbouring samples."""
        if self.kind == "interval_01":
            return float(np.max(np.diff(self.sample(k).real)))
        return 2.0 * np.pi / k

    def grid(self, k: int) -> np.ndarray:
        """Points for checking set conditions.

        Same as :meth:`sample` except on the disc, where seven interior rings
        and the centre are added to the boundary circle.
        """
        boundary = self.sample(k)
        if self.kind != "closed_unit_disc":
            return boundary
        per_ring = max(8, k // 8)
        theta = 2.0 * np.pi * np.arange(per_ring) / per_ring
        rings = [r * np.exp(1j * theta) for r in np.arange(7, 0, -1) / 8]
        return np.concatenate([boundary, *rings, [0j]])

    def distance_to_set(self, w) -> np.ndarray:
        w = np.asarray(w, dtype=complex)
        if self.kind == "interval_01":
            return np.abs(w - np.clip(w.real, 0.0, 1.0))
        if self.kind == "closed_unit_disc":
            return np.maximum(np.abs(w) - 1.0, 0.0)
        return np.abs(np.abs(w) - 1.0)

    def distance_to_boundary(self, w) -> np.ndarray:
        """Distance to the topological boundary of the set in the plane."""
        w = np.asarray(w, dtype=complex)
        if self.kind == "interval_01":
            return self.distance_to_set(w)
        return np.abs(np.abs(w) - 1.0)

    def contains(self, w, tol: float = 1e-12) -> np.ndarray:
        return self.distance_to_set(w) <= tol

    def in_interior(self, w, margin: float = 0.0) -> np.ndarray:
        """``|w| < 1 - margin`` on the disc; always false for the other two sets."""
        w = np.asarray(w, dtype=complex)
        if not self.has_interior:
            return np.zeros(w.shape, dtype=bool)
        return np.abs(w) < 1.0 - margin

    def default_seeds(self) -> np.ndarray:
        """16 starting points for fixed-point searches."""
        if self.kind == "interval_01":
            return np.linspace(0.0, 1.0, 16).astype(complex)
        if self.kind == "unit_circle":
            return np.exp(2j * np.pi * np.arange(16) / 16)
        radii = np.repeat([0.0, 0.5, 0.9, 1.0], 4)
        angles = np.tile(np.arange(4), 4) * np.pi / 2 + np.repeat(np.arange(4), 4) * np.pi / 8
        return radii * np.exp(1j * angles)


INTERVAL = DomainSet("interval_01")
DISC = DomainSet("closed_unit_disc")
CIRCLE = DomainSet("unit_circle")


def domain(kind) -> DomainSet:
    if isinstance(kind, DomainSet):
        return kind
    return DomainSet(kind)
