"""Grid checks of the sufficient and necessary conditions for (compact)
composition homomorphisms, and a classifier that names which one fired.

"holds" always means "holds on the sample grid with the stated margin";
necessity violations are witnessed at concrete sample points.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .calculus import SupBracket, analyticity_index, sup_norm
from .maps import MapBetween
from .weights import WeightSequence, ratio_profile

__all__ = [
    "CheckResult",
    "DerivativeBound",
    "ClassifyConfig",
    "Condition",
    "DiagnosisReport",
    "CONCLUSIONS",
    "check_interior_mapping",
    "check_derivative_bound",
    "check_mixed_cover",
    "check_boundary_necessity",
    "classify",
]

CONCLUSIONS = ("compact_by_T3", "compact_by_T5", "compact_by_T6", "compact_by_T8",
               "compact_by_T9", "not_compact_by_L7", "not_endo_by_T10", "unknown")

NECESSITY_SLACK = 1e-9
MAX_WITNESSES = 16


class CheckResult(NamedTuple):
    status: str            # "holds" | "fails" | "inconclusive"
    witnesses: list        # sample points (complex)
    margin: float          # signed slack; negative when the condition fails
    count: int = 0         # number of offending samples, where meaningful


class DerivativeBound(NamedTuple):
    bracket: SupBracket
    strict: CheckResult    # sup |phi'| < 1 - margin, judged on the upper bracket
    weak: CheckResult      # sup |phi'| <= 1, judged on the lower bracket


def _first_points(points, mask, key=None) -> list:
    idx = np.flatnonzero(mask)
    if key is not None:
        # stable: ties keep sample order
        idx = idx[np.argsort(-np.round(key[idx], 12), kind="stable")]
    return [complex(points[i]) for i in idx[:MAX_WITNESSES]]


def check_interior_mapping(phi: MapBetween, margin: float = 1e-3, k_samples: int = 4096) -> CheckResult:
    """Does ``phi`` map into the interior of its target (with ``margin``)?

    Only the disc has interior; for [0, 1] and the circle the check fails
    outright, witnessed by the sample whose image has the largest modulus.
    """
    pts = phi.source.grid(k_samples)
    mags = np.abs(phi.phi.evaluate(pts))
    top = float(mags.max())
    worst = int(np.argmax(mags >= top * (1 - 1e-12)))
    if not phi.target.has_interior:
        return CheckResult("fails", [complex(pts[worst])], -math.inf)
    slack = (1.0 - margin) - top
    return CheckResult("holds" if slack >= 0 else "fails", [complex(pts[worst])], slack)


def check_derivative_bound(phi: MapBetween, k_samples: int = 4096, margin: float = 0.0) -> DerivativeBound:
    """Bracket ``||phi'||_inf`` on the source set.

    ``strict`` holds iff the upper bracket is below ``1 - margin``;
    ``weak`` holds iff the lower bracket is at most ``1 + 1e-9``.
    """
    bracket = sup_norm(phi.derivative, phi.source, k_samples)
    strict_slack = (1.0 - margin) - bracket.upper
    weak_slack = (1.0 + NECESSITY_SLACK) - bracket.lower
    w = [bracket.argmax]
    return DerivativeBound(
        bracket,
        CheckResult("holds" if strict_slack > 0 else "fails", w, strict_slack),
        CheckResult("holds" if weak_slack >= 0 else "fails", w, weak_slack),
    )


def check_mixed_cover(phi: MapBetween, margin: float = 1e-3, k_samples: int = 4096) -> CheckResult:
    """Every sample has ``|phi'(z)| < 1 - margin`` or ``phi(z)`` in the target interior."""
    pts = phi.source.grid(k_samples)
    dmag = np.abs(phi.derivative.evaluate(pts))
    images = phi.phi.evaluate(pts)
    slack = (1.0 - margin) - dmag
    if phi.target.has_interior:
        slack = np.maximum(slack, (1.0 - margin) - np.abs(images))
    uncovered = slack <= 0
    worst = float(slack.min())
    if uncovered.any():
        return CheckResult("fails", _first_points(pts, uncovered, -slack), worst, int(uncovered.sum()))
    return CheckResult("holds", [], worst)


def check_boundary_necessity(phi: MapBetween, strict: bool = True, k_samples: int = 4096,
                             boundary_margin: float | None = None) -> CheckResult:
    """Scan samples whose image lies on the boundary for large ``|phi'|``.

    ``strict`` flags ``|phi'(z)| >= 1 - 1e-9`` (necessary for compactness);
    otherwise ``|phi'(z)| > 1 + 1e-9`` is flagged (necessary for an
    endomorphism). Only the disc and the circle are supported. Status is
    ``fails`` when something is flagged, witnesses ordered by ``|phi'|``.
    """
    X = phi.target
    if X.kind not in ("closed_unit_disc", "unit_circle"):
        raise ValueError("boundary necessity is only established for the disc and the circle")
    bm = X.boundary_margin if boundary_margin is None else boundary_margin
    pts = phi.source.grid(k_samples)
    near = X.distance_to_boundary(phi.phi.evaluate(pts)) < bm
    dmag = np.abs(phi.derivative.evaluate(pts))
    if strict:
        slack = (1.0 - NECESSITY_SLACK) - dmag
        bad = near & (slack <= 0)
    else:
        slack = (1.0 + NECESSITY_SLACK) - dmag
        bad = near & (slack < 0)
    if not near.any():
        return CheckResult("holds", [], math.inf)
    worst = float(slack[near].min())
    if bad.any():
        return CheckResult("fails", _first_points(pts, bad, dmag), worst, int(bad.sum()))
    return CheckResult("holds", [], worst)


@dataclass(frozen=True)
class ClassifyConfig:
    margin: float = 1e-3
    k_samples: int = 4096
    analyticity_k_max: int = 20
    ratio_n_max: int = 100
    necessity_priority: str = "compactness"   # or "endomorphism": T10 before L7
    find_fixed_point: bool = True


class Condition(NamedTuple):
    id: str
    status: str
    witnesses: list
    margin: float
    note: str = ""


@dataclass
class DiagnosisReport:
    conditions: list
    conclusion: str
    analyticity_max: float
    derivative_bracket: SupBracket
    ratio_verdict: str
    fixed_point: object = None
    notes: list = field(default_factory=list)

    @property
    def is_compact(self) -> bool:
        return self.conclusion.startswith("compact_by_")

    def condition(self, cid: str) -> Condition:
        for c in self.conditions:
            if c.id == cid:
                return c
        raise KeyError(cid)

    @property
    def margins(self) -> dict:
        return {c.id: c.margin for c in self.conditions}

    def to_json(self) -> dict:
        def num(x):
            return x if math.isfinite(x) else None

        return {
            "conclusion": self.conclusion,
            "conditions": [
                {"id": c.id, "status": c.status, "margin": num(c.margin),
                 "witnesses": [[z.real, z.imag] for z in c.witnesses], "note": c.note}
                for c in self.conditions
            ],
            "derivative_sup": {"lower": self.derivative_bracket.lower,
                               "upper": self.derivative_bracket.upper,
                               "argmax": [self.derivative_bracket.argmax.real,
                                          self.derivative_bracket.argmax.imag]},
            "analyticity_index_max": self.analyticity_max,
            "ratio_verdict": self.ratio_verdict,
            "fixed_point": None if self.fixed_point is None else self.fixed_point.to_json(),
            "notes": list(self.notes),
        }


def classify(phi: MapBetween, w: WeightSequence, config: ClassifyConfig | None = None) -> DiagnosisReport:
    """Run every check that applies to the map's sets and name a conclusion.

    Order: a strict boundary-necessity violation wins (``not_compact_by_L7``);
    then interior mapping (T3); then, for maps with a finite analyticity
    index, the derivative bound (T9 on the circle, T5 elsewhere) and the
    mixed cover (T8 for disc self-maps, T6 elsewhere). The weak-derivative /
    ratio pair (T4) is reported but never concludes compactness.
    """
    cfg = config or ClassifyConfig()
    k = cfg.k_samples
    conditions: list[Condition] = []
    notes: list[str] = []

    t3 = check_interior_mapping(phi, cfg.margin, k)
    note = "" if phi.target.has_interior else "target has empty interior"
    conditions.append(Condition("T3", t3.status, t3.witnesses, t3.margin, note))

    bound = check_derivative_bound(phi, k, cfg.margin)
    ratio = ratio_profile(w, min(cfg.ratio_n_max, w.n_top - 1))
    if bound.strict.status == "holds":
        t4_status = "holds"
    elif bound.weak.status == "fails":
        t4_status = "fails"
    else:
        t4_status = "holds" if ratio.verdict == "bounded trend" else "inconclusive"
    conditions.append(Condition("T4", t4_status, bound.weak.witnesses, bound.weak.margin,
                                f"weak derivative {bound.weak.status}; ratio {ratio.verdict}"))

    circle_self = phi.self_map and phi.source.kind == "unit_circle"
    disc_self = phi.self_map and phi.source.kind == "closed_unit_disc"
    conditions.append(Condition("T5", bound.strict.status, bound.strict.witnesses, bound.strict.margin))
    if circle_self:
        conditions.append(Condition("T9", bound.strict.status, bound.strict.witnesses,
                                    bound.strict.margin))

    mixed = check_mixed_cover(phi, cfg.margin, k)
    conditions.append(Condition("T8" if disc_self else "T6", mixed.status, mixed.witnesses,
                                mixed.margin))

    necessity = phi.self_map and phi.source.kind in ("closed_unit_disc", "unit_circle")
    l7 = t10 = None
    if necessity:
        l7 = check_boundary_necessity(phi, True, k)
        t10 = check_boundary_necessity(phi, False, k)
        conditions.append(Condition("L7", l7.status, l7.witnesses, l7.margin))
        conditions.append(Condition("T10", t10.status, t10.witnesses, t10.margin))

    analytic = analyticity_index(phi.phi, phi.source, cfg.analyticity_k_max, k).maximum
    is_analytic = math.isfinite(analytic)

    if necessity and cfg.necessity_priority == "endomorphism" and t10.status == "fails":
        conclusion = "not_endo_by_T10"
    elif necessity and l7.status == "fails":
        conclusion = "not_compact_by_L7"
    elif t3.status == "holds":
        conclusion = "compact_by_T3"
    elif is_analytic and bound.strict.status == "holds":
        conclusion = "compact_by_T9" if circle_self else "compact_by_T5"
    elif is_analytic and mixed.status == "holds":
        conclusion = "compact_by_T8" if disc_self else "compact_by_T6"
    else:
        conclusion = "unknown"

    fixed = None
    if conclusion.startswith("compact_by_") and phi.self_map and cfg.find_fixed_point:
        from .operator import find_fixed_point

        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            fixed = find_fixed_point(phi)
        notes.extend(f"inconsistency: {c.message}" for c in caught)
        if abs(fixed.derivative_at_fixed_point) >= 1:
            notes.append("inconsistency: |phi'(x0)| >= 1 at the fixed point of a map ruled compact")

    return DiagnosisReport(conditions, conclusion, analytic, bound.bracket, ratio.verdict,
                           fixed, notes)
