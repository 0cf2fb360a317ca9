"""Small worked cases with hand-derivable answers, grouped by module."""

import math
from pathlib import Path

import numpy as np
import pytest

from ddlab import (CIRCLE, DISC, INTERVAL, SeriesFunction, WeightSequence, affine, analyticity_index,
                   assemble_matrix, check_boundary_necessity, check_derivative_bound,
                   check_interior_mapping, check_mixed_cover, classify, compose_series,
                   composed_norm_profile, d_norm_profile, differentiate, eigenvalues,
                   entire_order_estimate, faa_di_bruno, find_fixed_point, fourier_coefficients, identity,
                   non_analyticity_profile, ratio_profile, singular_value_profile, spectrum_check,
                   sup_norm, validate_admissibility, weighted_normalize, wermer_circle)
from ddlab.cli import main
from ddlab.maps import monomial

import oracles

W15 = WeightSequence.factorial_power(1.5)


# -- weights --------------------------------------------------------------------

def test_factorial_margin_is_zero_everywhere():
    rep = validate_admissibility(WeightSequence.factorial_power(1.0), 25)
    assert rep.passed
    assert np.nanmax(np.abs(rep.margins)) < 1e-9


def test_constant_weight_fails_at_one_one():
    rep = validate_admissibility(WeightSequence.tabulated(values=[1.0] * 5), 2)
    assert not rep.passed and rep.first_failure == (1, 1)


def test_geometric_factor_is_not_non_analytic():
    n = np.arange(300)
    w = WeightSequence.tabulated(log_values=[math.lgamma(k + 1) + k * math.log(2) for k in n])
    prof = non_analyticity_profile(w, 100)
    assert np.allclose(prof.values, 0.5)
    assert prof.verdict == "not non-analytic"


@pytest.mark.parametrize("gamma, verdict", [(1.5, "divergent trend"), (2.0, "bounded trend"),
                                            (1.0, "divergent trend")])
def test_ratio_verdicts(gamma, verdict):
    assert ratio_profile(WeightSequence.factorial_power(gamma), 100).verdict == verdict


@pytest.mark.parametrize("gamma", [1.0, 1.5, 2.0])
def test_entire_order_within_ten_percent(gamma):
    est = entire_order_estimate(WeightSequence.factorial_power(gamma, 512), 200)
    assert abs(est.order - 1 / gamma) <= 0.1 / gamma


# -- calculus -------------------------------------------------------------------

def test_power_rules():
    assert np.allclose(differentiate(SeriesFunction.taylor([0, 0, 0, 1]), 2).coefficients, [0, 6])
    g = differentiate(SeriesFunction.from_terms({-1: 1.0, 1: 1.0}), 1)
    z = np.exp(1j * np.linspace(0, 6, 7))
    assert np.allclose(g(z), -z ** -2 + 1)


def test_truncated_exp_is_its_own_derivative():
    f = SeriesFunction.taylor([1 / math.factorial(k) for k in range(11)])
    g = differentiate(f, 3)
    assert np.allclose(g.coefficients, [1 / math.factorial(k) for k in range(8)], rtol=1e-14)


@pytest.mark.parametrize("n", [1, 5, 20])
def test_sup_of_monomial_on_disc(n):
    b = sup_norm(SeriesFunction.taylor([0] * n + [1]), DISC, 4096)
    assert b.lower <= 1 + 1e-14 and b.upper >= 1 - 1e-14
    assert b.upper - b.lower < 1e-3 * max(1, n)


def test_sup_of_parabola_and_cosine():
    b = sup_norm(SeriesFunction.taylor([0, 1, -1], INTERVAL), INTERVAL, 4096)
    assert b.lower <= 0.25 <= b.upper
    b = sup_norm(SeriesFunction.from_terms({-1: 1.0, 1: 1.0}), CIRCLE, 4096)
    assert b.lower <= 2 + 1e-14 and 2 <= b.upper


def test_small_compositions():
    phi = SeriesFunction.taylor([0.25, 0.5])
    g = compose_series(SeriesFunction.taylor([0, 0, 1]), phi, 2)
    assert np.allclose(g.coefficients, [1 / 16, 1 / 4, 1 / 4])
    assert np.allclose(compose_series(SeriesFunction.taylor([0, 1]), phi, 1).coefficients, [0.25, 0.5])
    g = compose_series(SeriesFunction.taylor([0, 0, 0, 1]), SeriesFunction.taylor([0, 0.3j]), 3)
    assert np.allclose(g.coefficients, [0, 0, 0, (0.3j) ** 3])


def test_chain_rule_low_orders():
    fd, pd = [0.3, 1.7, -0.4, 2.0], [0.1, 0.9, 1.1, -0.6]
    assert faa_di_bruno(fd, pd, 1) == pytest.approx(fd[1] * pd[1])
    assert faa_di_bruno(fd, pd, 2) == pytest.approx(fd[2] * pd[1] ** 2 + fd[1] * pd[2])
    assert faa_di_bruno([1.0] * 7, [0.0] + [1.0] * 6, 6) == pytest.approx(203)


def test_analyticity_index_small_cases():
    idx = analyticity_index(SeriesFunction.taylor([0, 0.5j]), DISC, 5)
    assert idx.maximum == pytest.approx(0.5, rel=1e-3)
    idx = analyticity_index(SeriesFunction.taylor([0, 0, 1]), DISC, 5)
    assert idx.values[0] == pytest.approx(2, rel=1e-3) and idx.values[1] == pytest.approx(1, rel=1e-3)
    assert np.all(idx.values[2:] == 0) and idx.maximum == pytest.approx(2, rel=1e-3)


def test_fourier_small_cases():
    z = np.exp(2j * np.pi * np.arange(64) / 64)
    f = fourier_coefficients(z ** 2, 4)
    assert abs(f.coefficient(2) - 1) < 1e-12
    assert np.all(np.abs(np.delete(f.coefficients, 2 + 4)) < 1e-12)
    f = fourier_coefficients(2 * np.cos(np.angle(z)), 4)
    assert f.coefficient(1) == pytest.approx(1) and f.coefficient(-1) == pytest.approx(1)


def test_wermer_series_matches_closed_form():
    f = wermer_circle(0.2, 40, 10).phi
    theta = np.random.default_rng(1000).uniform(0, 2 * np.pi, 1000)
    z = np.exp(1j * theta)
    assert np.max(np.abs(f(z) - oracles.wermer_closed_form(0.2, z))) < 1e-9


# -- algebra --------------------------------------------------------------------

def test_profile_of_z_and_one():
    p = d_norm_profile(SeriesFunction.taylor([0, 1]), W15, DISC, 25)
    assert p.terms[:2] == pytest.approx([1, 1], rel=1e-3) and np.all(p.terms[2:] == 0)
    assert p.norm == pytest.approx(2, rel=1e-3) and p.verdict == "convergent_trend"
    p = d_norm_profile(SeriesFunction.taylor([1.0]), W15, DISC, 25)
    assert p.terms[0] == 1.0 and p.norm == 1.0


def test_truncated_exp_on_disc():
    f = SeriesFunction.taylor([1 / math.factorial(k) for k in range(31)])
    p = d_norm_profile(f, W15, DISC, 25)
    n = np.arange(6)
    ref = math.e / np.exp(1.5 * np.array([math.lgamma(k + 1) for k in n]))
    assert np.allclose(p.terms[:6], ref, rtol=2e-3)
    g1 = math.fsum(1 / math.factorial(k) ** 1.5 for k in range(26))
    assert p.norm == pytest.approx(math.e * g1, rel=2e-3)
    assert p.verdict == "convergent_trend"


def test_composed_profile_of_affine():
    p = composed_norm_profile(SeriesFunction.taylor([0, 1]), affine(0.5, 0.25), W15, 25)
    assert p.terms[:2] == pytest.approx([0.75, 0.5], rel=1e-3) and np.all(p.terms[2:] == 0)
    assert p.meta["out_degree"] == 1


def test_identity_composition_is_neutral(rng):
    f = SeriesFunction.taylor(rng.normal(size=6))
    a = d_norm_profile(f, W15, DISC, 10)
    b = composed_norm_profile(f, identity(), W15, 10)
    assert np.allclose(a.terms, b.terms, rtol=1e-12)


def test_submultiplicativity_and_homogeneity(rng):
    for _ in range(20):
        f = SeriesFunction.taylor(rng.normal(size=7) + 1j * rng.normal(size=7))
        g = SeriesFunction.taylor(rng.normal(size=7) + 1j * rng.normal(size=7))
        nf, ng = (d_norm_profile(h, W15, DISC, 25).norm for h in (f, g))
        assert d_norm_profile(f * g, W15, DISC, 25).norm <= nf * ng + 1e-6
        lam = 2.5 - 1j
        assert d_norm_profile(lam * f, W15, DISC, 25).norm == pytest.approx(abs(lam) * nf, rel=1e-12)
        p = d_norm_profile(f, W15, DISC, 25)
        assert np.count_nonzero(p.terms) == 7 and p.verdict == "convergent_trend"
        assert np.all(np.diff(p.partial_sums) >= 0)
        assert np.allclose(p.partial_sums, np.cumsum(p.terms), rtol=1e-12)


# -- operator -------------------------------------------------------------------

def test_small_matrices():
    m = assemble_matrix(affine(0.5, 0.25), N=4).entries
    assert np.allclose(np.diag(m), [1, 0.5, 0.25, 0.125]) and m[0, 1] == pytest.approx(0.25)
    assert np.allclose(np.tril(m, -1), 0)
    assert np.allclose(assemble_matrix(identity(), N=6).entries, np.eye(6))
    assert np.allclose(assemble_matrix(identity(CIRCLE), "laurent", N=7).entries, np.eye(7), atol=1e-14)
    assert np.allclose(assemble_matrix(affine(0.3j), N=5).entries, np.diag(0.3j ** np.arange(5)))


def test_small_spectra():
    a = 0.4
    assert np.allclose(eigenvalues(np.diag([1, a, a * a])), [1, a, a * a])
    ev = eigenvalues(assemble_matrix(affine(0.5, 0.25), N=8))
    assert np.max(np.abs(ev - 2.0 ** -np.arange(8))) < 1e-12
    assert np.allclose(eigenvalues(np.array([[0, 1], [0, 0]])), [0, 0])


def test_weighted_normalize_small_cases():
    ln = weighted_normalize(assemble_matrix(identity(), N=4), W15).log_norms
    assert np.exp(ln[:2]) == pytest.approx([1, 2])
    assert np.allclose(weighted_normalize(assemble_matrix(identity(), N=8), W15).entries, np.eye(8))
    m = assemble_matrix(affine(0.5), N=8)
    assert np.allclose(weighted_normalize(m, W15).entries, m.entries)


def test_singular_values_of_contraction():
    # the weighted matrix stays diagonal, so sigma_k = 2**-k and 1e-6 is only
    # crossed at k = 20: too late for N = 32, in time for N = 64
    prof = singular_value_profile(weighted_normalize(assemble_matrix(affine(0.5), N=32), W15))
    assert np.allclose(prof.values, 2.0 ** -np.arange(32)) and prof.verdict == "inconclusive"
    prof = singular_value_profile(weighted_normalize(assemble_matrix(affine(0.5), N=64), W15))
    assert prof.verdict == "compact-consistent"
    prof = singular_value_profile(weighted_normalize(assemble_matrix(identity(), N=32), W15))
    assert np.allclose(prof.values, 1) and prof.verdict == "non-compact-consistent"


def test_fixed_points():
    fp = find_fixed_point(affine(0.3j))
    assert abs(fp.x0) < 1e-12 and fp.derivative_at_fixed_point == pytest.approx(0.3j)


@pytest.mark.parametrize("alpha", [0.5, -0.3, 0.4j])
def test_diagonal_spectrum_is_exact(alpha):
    rep = spectrum_check(affine(alpha), W15, 16, k=6)
    assert rep.max_distance < 1e-15 and rep.ok


def test_wermer_spectrum_top_five():
    rep = spectrum_check(wermer_circle(0.2, 40), W15, 65, k=5, basis="laurent")
    top = np.array([q for _, q, _ in rep.pairs])[:5]
    assert np.max(np.abs(top - [1, 0.4, 0.16, 0.064, 0.0256])) < 1e-3


# -- criteria -------------------------------------------------------------------

def test_interior_affine_witness():
    res = check_interior_mapping(affine(0.5, 0.25), margin=0.25)
    assert res.status == "holds" and res.witnesses[0] == pytest.approx(1.0)
    assert check_interior_mapping(identity()).status == "fails"


def test_derivative_bound_cases():
    b = check_derivative_bound(affine(0.5))
    assert b.bracket.lower == pytest.approx(0.5) and b.strict.status == "holds"
    b = check_derivative_bound(wermer_circle(0.6))
    assert b.bracket.lower <= 1.2 + 1e-12 <= b.bracket.upper + 1e-12
    assert b.strict.status == "fails" and abs(np.angle(b.strict.witnesses[0])) < 1e-6


def test_mixed_cover_cases():
    assert check_mixed_cover(monomial(2, 0.25)).status == "holds"
    res = check_mixed_cover(monomial(2))
    assert res.status == "fails" and 1 + 0j in [complex(round(z.real, 12), round(z.imag, 12))
                                                for z in res.witnesses]


def test_boundary_scan_cases():
    strict = check_boundary_necessity(wermer_circle(0.5), strict=True)
    weak = check_boundary_necessity(wermer_circle(0.5), strict=False)
    assert strict.status == "fails" and strict.witnesses[0] == pytest.approx(1.0)
    assert weak.status == "holds"
    vacuous = check_boundary_necessity(affine(0.5, 0.25))
    assert vacuous.status == "holds" and vacuous.witnesses == []


def test_classifier_cases():
    assert classify(wermer_circle(0.2), W15).conclusion == "compact_by_T9"
    assert classify(wermer_circle(0.6), W15).conclusion == "not_compact_by_L7"
    assert classify(affine(0.5, 0.25), W15).conclusion == "compact_by_T3"


# -- cli artifacts --------------------------------------------------------------

def _data_lines(path):
    return [line.split() for line in Path(path).read_text().splitlines() if not line.startswith("#")]


def test_plot_files(tmp_path):
    root = Path(__file__).resolve().parents[1] / "scenarios"
    assert main(["norm", "--config", str(root / "counterexample_norm.json"), "--out", str(tmp_path / "n")]) == 0
    rows = _data_lines(tmp_path / "n" / "norm_partial_sums.dat")
    assert len(rows) == 26 and all(float(b[1]) >= float(a[1]) for a, b in zip(rows, rows[1:]))

    cfg = tmp_path / "aff.json"
    cfg.write_text('{"domain": "closed_unit_disc", "map": {"family": "affine", "alpha": 0.5},'
                   ' "experiment": "spectrum", "knobs": {"N": 64}}')
    assert main(["spectrum", "--config", str(cfg), "--out", str(tmp_path / "s")]) == 0
    rows = _data_lines(tmp_path / "s" / "singular_values.dat")
    assert len(rows) == 64 and all(float(b[1]) <= float(a[1]) for a, b in zip(rows, rows[1:]))
    assert len(_data_lines(tmp_path / "s" / "eigenvalue_error.dat")) == 3


def test_sweep_affine_rows(tmp_path):
    import csv

    root = Path(__file__).resolve().parents[1] / "scenarios"
    assert main(["sweep", "--config", str(root / "affine_sweep.json"), "--out", str(tmp_path)]) == 0
    rows = list(csv.DictReader(open(tmp_path / "sweep.csv")))
    assert [r["conclusion"] for r in rows] == ["compact_by_T3"] * 3
    assert all(float(r["top_eigenvalue_error"]) < 1e-10 for r in rows)
