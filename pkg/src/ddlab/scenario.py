"""Config-driven experiments: classify, spectrum, norm profiles and sweeps.

A scenario is a JSON document::

    {
      "domain": "unit_circle",
      "weight": {"kind": "factorial_power", "gamma": 1.5},
      "map": {"family": "wermer_circle", "c": 0.2},
      "experiment": "spectrum",
      "knobs": {"d": 32, "k": 5}
    }

Only ``domain`` and ``map`` are required. Every artifact is written with
deterministic formatting so that re-running a scenario reproduces it byte
for byte.
"""

from __future__ import annotations

import copy
import csv
import json
import math
import os
from dataclasses import dataclass, field

import numpy as np

from .algebra import composed_norm_profile, d_norm_profile
from .calculus import SeriesFunction
from .criteria import ClassifyConfig, classify
from .domains import DomainSet
from .errors import ConfigError, LabError
from .maps import FAMILIES, map_from_spec
from .operator import (assemble_matrix, singular_value_profile, spectrum_check,
                       weighted_normalize)
from .weights import (entire_order_estimate, non_analyticity_profile, ratio_profile,
                      validate_admissibility, weight_from_spec)

__all__ = ["Scenario", "DEFAULT_KNOBS", "EXPERIMENTS", "load_scenario", "run_scenario",
           "run_sweep", "emit_plot_data"]

EXPERIMENTS = ("classify", "spectrum", "norm_profile", "sweep")

DEFAULT_KNOBS = {
    "N": 32,                      # taylor truncation size
    "d": 32,                      # laurent half-width, N = 2d + 1
    "k": 5,                       # predicted powers to match
    "tol": 1e-10,                 # spectral noise floor
    "spill_tol": 1e-6,
    "convergence_N": [17, 33, 65],
    "n_max": 25,
    "samples": 4096,
    "margin": 1e-3,
    "analyticity_k_max": 20,
    "out_degree": None,
    "engine": "series",
    "stress": {"kind": "exp", "degree": 40},
    "probes": 0,                  # random polynomials pushed through T in norm_profile
    "probe_degree": 6,
}

DEFAULT_WEIGHT = {"kind": "factorial_power", "gamma": 1.5}

EXIT_OK, EXIT_ERROR, EXIT_INCONSISTENT = 0, 1, 2


@dataclass
class Scenario:
    domain: str
    map: dict
    weight: dict = field(default_factory=lambda: dict(DEFAULT_WEIGHT))
    experiment: str = "classify"
    knobs: dict = field(default_factory=dict)
    sweep: dict | None = None
    seed: int = 0

    @classmethod
    def from_dict(cls, data: dict) -> "Scenario":
        if not isinstance(data, dict):
            raise ConfigError("scenario must be a JSON object")
        unknown = set(data) - {"domain", "map", "weight", "experiment", "knobs", "sweep", "seed"}
        if unknown:
            raise ConfigError(f"unknown keys {sorted(unknown)}")
        for key in ("domain", "map"):
            if key not in data:
                raise ConfigError("required", key)
        try:
            DomainSet(data["domain"])
        except ValueError as exc:
            raise ConfigError(str(exc), "domain") from None
        if not isinstance(data["map"], dict) or data["map"].get("family") not in FAMILIES:
            raise ConfigError(f"family must be one of {', '.join(FAMILIES)}", "map.family")
        experiment = data.get("experiment", "classify")
        if experiment not in EXPERIMENTS:
            raise ConfigError(f"must be one of {', '.join(EXPERIMENTS)}", "experiment")
        knobs = data.get("knobs", {})
        bad = set(knobs) - set(DEFAULT_KNOBS)
        if bad:
            raise ConfigError(f"unknown knobs {sorted(bad)}", "knobs")
        sweep = data.get("sweep")
        if sweep is not None:
            if not isinstance(sweep, dict) or "parameter" not in sweep or not sweep.get("values"):
                raise ConfigError("needs 'parameter' and a non-empty 'values' list", "sweep")
        return cls(domain=data["domain"], map=copy.deepcopy(data["map"]),
                   weight=copy.deepcopy(data.get("weight", DEFAULT_WEIGHT)),
                   experiment=experiment, knobs=copy.deepcopy(knobs),
                   sweep=copy.deepcopy(sweep), seed=int(data.get("seed", 0)))

    def to_dict(self) -> dict:
        out = {"domain": self.domain, "map": self.map, "weight": self.weight,
               "experiment": self.experiment, "knobs": self.knobs, "seed": self.seed}
        if self.sweep is not None:
            out["sweep"] = self.sweep
        return copy.deepcopy(out)

    def knob(self, name):
        return self.knobs.get(name, DEFAULT_KNOBS[name])

    def build_weight(self):
        try:
            return weight_from_spec(self.weight)
        except (KeyError, ValueError) as exc:
            raise ConfigError(str(exc), "weight") from None

    def build_map(self, overrides: dict | None = None):
        spec = dict(self.map)
        if overrides:
            spec.update(overrides)
        return map_from_spec(spec, self.domain)

    def classify_config(self) -> ClassifyConfig:
        return ClassifyConfig(margin=float(self.knob("margin")), k_samples=int(self.knob("samples")),
                              analyticity_k_max=int(self.knob("analyticity_k_max")))


def load_scenario(path) -> Scenario:
    with open(path) as fh:
        text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return Scenario.from_dict(data)


# -- output helpers -----------------------------------------------------------

def _clean(obj):
    """Make a structure JSON-safe: complex -> [re, im], numpy scalars -> float, inf/nan -> None."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        return [_clean(float(obj.real)), _clean(float(obj.imag))]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else None
    return obj


def _write_json(path, payload) -> None:
    with open(path, "w") as fh:
        json.dump(_clean(payload), fh, indent=2, sort_keys=True, allow_nan=False)
        fh.write("\n")


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    x = float(x)
    return repr(x) if math.isfinite(x) else ""


def emit_plot_data(curves: dict, out_dir) -> list:
    """Write each curve as a two-column whitespace-separated file.

    ``curves`` maps a file stem to ``(quantity, xs, ys)``; the first line of
    each file is a ``#`` comment naming the quantity. Non-finite points are
    dropped.
    """
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    for stem in sorted(curves):
        quantity, xs, ys = curves[stem]
        path = os.path.join(out_dir, f"{stem}.dat")
        with open(path, "w") as fh:
            fh.write(f"# {quantity}\n")
            for x, y in zip(xs, ys):
                x, y = float(x), float(y)
                if math.isfinite(x) and math.isfinite(y):
                    fh.write(f"{x!r} {y!r}\n")
        paths.append(path)
    return paths


# -- experiments --------------------------------------------------------------

def _diagnosis_rows(diag) -> list:
    rows = []
    for c in diag.conditions:
        z = c.witnesses[0] if c.witnesses else None
        rows.append([c.id, c.status, _fmt(c.margin if math.isfinite(c.margin) else None),
                     _fmt(None if z is None else z.real), _fmt(None if z is None else z.imag)])
    return rows


def _write_csv(path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _experiment_classify(s: Scenario, out_dir, force: bool):
    w = s.build_weight()
    phi = s.build_map()
    diag = classify(phi, w, s.classify_config())
    _write_csv(os.path.join(out_dir, "conditions.csv"),
               ["condition", "status", "margin", "witness_re", "witness_im"], _diagnosis_rows(diag))
    return {"map": phi.describe(), "diagnosis": diag.to_json()}, {}, EXIT_OK


def _truncation_size(s: Scenario, phi) -> tuple:
    if phi.phi.basis == "laurent":
        return "laurent", 2 * int(s.knob("d")) + 1
    return "taylor", int(s.knob("N"))


def _experiment_spectrum(s: Scenario, out_dir, force: bool):
    w = s.build_weight()
    phi = s.build_map()
    diag = classify(phi, w, s.classify_config())
    necessity_violated = any(c.id in ("L7", "T10") and c.status == "fails" for c in diag.conditions)
    basis, N = _truncation_size(s, phi)
    k, tol, spill_tol = int(s.knob("k")), float(s.knob("tol")), float(s.knob("spill_tol"))
    payload = {"map": phi.describe(), "diagnosis": diag.to_json(), "forced": bool(force)}
    if not diag.is_compact and not force:
        payload["spectrum"] = None
        payload["message"] = "classification is not compact; spectrum skipped (use --force)"
        return payload, {}, EXIT_OK

    report = spectrum_check(phi, w, N, k, tol, force=True, basis=basis, spill_tol=spill_tol)
    report.to_csv(os.path.join(out_dir, "spectrum.csv"))
    payload["spectrum"] = report.to_json()

    weighted = weighted_normalize(assemble_matrix(phi, basis, N, spill_tol=spill_tol), w)
    sv = singular_value_profile(weighted)
    payload["singular_values"] = {"verdict": sv.verdict, "values": sv.values}
    weighted.dump_json(os.path.join(out_dir, "matrix.json"))

    study = []
    for size in s.knob("convergence_N"):
        size = int(size)
        try:
            r = spectrum_check(phi, w, size, k, tol, force=True, basis=basis, spill_tol=spill_tol)
            study.append({"N": size, "max_distance": r.max_distance})
        except LabError as exc:
            study.append({"N": size, "error": str(exc)})
    payload["convergence"] = study
    ok_rows = [row for row in study if "max_distance" in row]
    curves = {
        "singular_values": ("singular value of the weighted truncation vs index",
                            np.arange(1, sv.values.size + 1), sv.values),
        "eigenvalue_error": ("max matched eigenvalue distance vs N",
                             [r["N"] for r in ok_rows], [r["max_distance"] for r in ok_rows]),
    }
    code = EXIT_INCONSISTENT if (force and necessity_violated) else EXIT_OK
    if code == EXIT_INCONSISTENT:
        payload["message"] = "necessity violation coexists with the forced compactness assumption"
    return payload, curves, code


def _stress_function(spec: dict, X: DomainSet) -> SeriesFunction:
    kind = spec.get("kind", "exp")
    degree = int(spec.get("degree", 40))
    if kind == "exp":
        return SeriesFunction.taylor([1.0 / math.factorial(j) for j in range(degree + 1)], X)
    if kind == "geometric":
        ratio = float(spec.get("ratio", 0.5))
        return SeriesFunction.taylor([ratio ** j for j in range(degree + 1)], X)
    raise ConfigError(f"unknown stress function {kind!r}", "knobs.stress.kind")


def _experiment_norm(s: Scenario, out_dir, force: bool):
    w = s.build_weight()
    phi = s.build_map()
    n_max = int(s.knob("n_max"))
    samples = int(s.knob("samples"))
    stress = _stress_function(s.knob("stress"), phi.target)
    engine = s.knob("engine")
    out_degree = s.knob("out_degree")
    if out_degree is None and phi.phi.basis == "laurent":
        out_degree = 2 * int(s.knob("d"))

    base = d_norm_profile(stress, w, phi.target, n_max, samples)
    composed = composed_norm_profile(stress, phi, w, n_max, out_degree, engine, samples)
    composed.to_csv(os.path.join(out_dir, "norm_profile.csv"))
    base.to_csv(os.path.join(out_dir, "stress_profile.csv"))

    payload = {
        "map": phi.describe(),
        "stress": s.knob("stress"),
        "exploratory": phi.name == "counterexample_interval",
        "stress_profile": {"norm": base.norm, "verdict": base.verdict},
        "composed_profile": {"norm": composed.norm, "verdict": composed.verdict,
                             "out_degree": composed.meta["out_degree"], "engine": engine},
    }
    weights = {}
    half = w.n_top // 2
    adm = validate_admissibility(w, min(n_max, half))
    weights["admissible"] = adm.passed
    weights["admissibility_min_margin"] = adm.min_margin
    na = non_analyticity_profile(w, min(100, w.n_top))
    rp = ratio_profile(w, min(100, w.n_top - 1))
    weights["non_analyticity"] = {"last": float(na.values[-1]), "verdict": na.verdict}
    weights["ratio"] = {"last": float(rp.values[-1]), "verdict": rp.verdict}
    if w.n_top >= 20:
        try:
            weights["entire_order"] = entire_order_estimate(w, min(200, w.n_top)).order
        except LabError as exc:
            weights["entire_order"] = str(exc)
    payload["weight_diagnostics"] = weights

    probes = int(s.knob("probes"))
    if probes:
        rng = np.random.default_rng(s.seed)
        ratios = []
        deg = int(s.knob("probe_degree"))
        for _ in range(probes):
            c = rng.uniform(-1, 1, deg + 1) + 1j * rng.uniform(-1, 1, deg + 1)
            f = SeriesFunction.taylor(c, phi.target)
            num = composed_norm_profile(f, phi, w, n_max, out_degree, engine, samples).norm
            den = d_norm_profile(f, w, phi.target, n_max, samples).norm
            ratios.append(num / den)
        payload["probe_norm_ratios"] = ratios
        payload["operator_norm_lower_bound"] = max(ratios)

    curves = {
        "norm_partial_sums": ("partial sums of the weighted norm of f o phi vs n",
                              composed.n, composed.partial_sums),
        "non_analyticity": ("(n!/M_n)^(1/n) vs n", na.n, na.values),
        "ratio_profile": ("n^2 M_n / M_(n+1) vs n", rp.n, rp.values),
    }
    return payload, curves, EXIT_OK


def run_sweep(s: Scenario, out_dir=None) -> list:
    """One row per sweep value: conclusion, ``sup|phi'|`` bracket and spectral error.

    Row failures are recorded in the ``error`` column instead of aborting.
    """
    if not s.sweep or not s.sweep.get("values"):
        raise ConfigError("needs a non-empty values list", "sweep")
    param = s.sweep["parameter"]
    w = s.build_weight()
    rows = []
    for value in s.sweep["values"]:
        row = {"parameter": value, "conclusion": "", "sup_lower": None, "sup_upper": None,
               "top_eigenvalue_error": None, "error": ""}
        try:
            phi = s.build_map({param: value})
            diag = classify(phi, w, s.classify_config())
            row["conclusion"] = diag.conclusion
            row["sup_lower"] = diag.derivative_bracket.lower
            row["sup_upper"] = diag.derivative_bracket.upper
            if diag.is_compact:
                basis, N = _truncation_size(s, phi)
                rep = spectrum_check(phi, w, N, int(s.knob("k")), float(s.knob("tol")),
                                     diagnosis=diag, basis=basis,
                                     spill_tol=float(s.knob("spill_tol")))
                row["top_eigenvalue_error"] = rep.max_distance
        except LabError as exc:
            row["error"] = f"{type(exc).__name__}: {exc}"
        rows.append(row)
    if out_dir is not None:
        _write_csv(os.path.join(out_dir, "sweep.csv"),
                   ["parameter", "conclusion", "sup_lower", "sup_upper", "top_eigenvalue_error", "error"],
                   [[_fmt(r["parameter"]), r["conclusion"], _fmt(r["sup_lower"]), _fmt(r["sup_upper"]),
                     _fmt(r["top_eigenvalue_error"]), r["error"]] for r in rows])
    return rows


def _experiment_sweep(s: Scenario, out_dir, force: bool):
    rows = run_sweep(s, out_dir)
    return {"sweep": s.sweep, "rows": rows}, {}, EXIT_OK


_RUNNERS = {
    "classify": _experiment_classify,
    "spectrum": _experiment_spectrum,
    "norm_profile": _experiment_norm,
    "sweep": _experiment_sweep,
}


def run_scenario(s: Scenario, out_dir, force: bool = False) -> int:
    """Run ``s.experiment`` and write ``report.json`` plus tables into ``out_dir``.

    Returns 0 on completion, 2 when a necessity violation coexists with a
    forced compactness assumption and 1 on errors (reported in the JSON).
    """
    os.makedirs(out_dir, exist_ok=True)
    try:
        payload, curves, code = _RUNNERS[s.experiment](s, out_dir, force)
    except (LabError, ValueError) as exc:
        _write_json(os.path.join(out_dir, "report.json"),
                    {"scenario": s.to_dict(), "error": f"{type(exc).__name__}: {exc}"})
        return EXIT_ERROR
    payload = {"scenario": s.to_dict(), "experiment": s.experiment, "exit_code": code, **payload}
    if curves:
        payload["plot_files"] = [os.path.basename(p) for p in emit_plot_data(curves, out_dir)]
    _write_json(os.path.join(out_dir, "report.json"), payload)
    return code
