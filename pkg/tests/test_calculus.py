import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ddlab import CIRCLE, DISC, INTERVAL, SeriesFunction, compose_series, differentiate, sup_norm
from ddlab.calculus import (analyticity_index, bell_polynomials, faa_di_bruno, faa_di_bruno_all,
                            fourier_coefficients)
from ddlab.errors import BasisMismatchError, InsufficientDerivativesError, TailTooLargeError
from ddlab.maps import wermer_series

import oracles


def test_evaluate_horner_matches_polyval(rng):
    c = rng.normal(size=7) + 1j * rng.normal(size=7)
    f = SeriesFunction.taylor(c)
    z = rng.normal(size=20) + 1j * rng.normal(size=20)
    assert np.allclose(f(z), np.polyval(c[::-1], z))


def test_laurent_evaluate():
    f = SeriesFunction.from_terms({-2: 1.0, 1: 3.0})
    z = np.exp(1j * np.linspace(0, 6, 9))
    assert np.allclose(f(z), z ** -2 + 3 * z)
    assert f.basis == "laurent" and f.low == -2


def test_laurent_requires_circle():
    with pytest.raises(BasisMismatchError):
        SeriesFunction([1.0, 2.0], DISC, "laurent", -1)


def test_differentiate_polynomial_to_zero():
    f = SeriesFunction.taylor([1, 2, 3])
    assert np.allclose(differentiate(f, 1).coefficients, [2, 6])
    assert differentiate(f, 3).is_zero()


def test_differentiate_steps_are_bitwise_consistent(rng):
    for basis in ("taylor", "laurent"):
        c = rng.normal(size=9) + 1j * rng.normal(size=9)
        f = SeriesFunction.taylor(c) if basis == "taylor" else SeriesFunction.laurent(c, -4)
        two = differentiate(differentiate(f, 1), 1)
        once = differentiate(f, 2)
        assert np.array_equal(two.coefficients, once.coefficients)
        assert two.low == once.low


def test_laurent_derivative_of_inverse():
    f = SeriesFunction.from_terms({-1: 1.0})
    g = differentiate(f, 2)
    z = np.exp(1j * np.linspace(0, 3, 5))
    assert np.allclose(g(z), 2 * z ** -3)


def test_json_roundtrip():
    f = SeriesFunction.laurent([1 + 2j, 0.5, -1j], -1)
    g = SeriesFunction.from_json(f.to_json())
    assert np.array_equal(f.coefficients, g.coefficients) and g.low == -1 and g.domain == CIRCLE


def test_sup_norm_bracket_contains_true_value():
    z = SeriesFunction.taylor([0.0, 1.0])
    b = sup_norm(z, DISC, 4096)
    assert b.lower <= 1.0 + 1e-15 and 1.0 <= b.upper
    assert b.upper - b.lower < 1e-3
    x2 = SeriesFunction.taylor([0.5, 0, 0.5], INTERVAL)
    b = sup_norm(x2, INTERVAL, 257)
    assert b.lower == pytest.approx(1.0) and b.argmax == pytest.approx(1.0)


def test_sup_norm_rejects_sparse_grid():
    with pytest.raises(ValueError):
        sup_norm(SeriesFunction.taylor([1.0]), DISC, 16)


def test_fourier_recovers_wermer_bessel_coefficients():
    c, d = 0.2, 20
    f = wermer_series(c, d, 10)
    assert f.low == -d
    assert np.allclose(f.coefficients, oracles.wermer_bessel_coefficients(c, d), atol=1e-14)


def test_fourier_tail_check():
    size = 64
    z = np.exp(2j * np.pi * np.arange(size) / size)
    with pytest.raises(TailTooLargeError):
        fourier_coefficients(z ** 5, 3)
    with pytest.raises(ValueError):
        fourier_coefficients(z[:60], 3)


def test_compose_taylor_exact(rng):
    f = SeriesFunction.taylor(rng.normal(size=4))
    phi = SeriesFunction.taylor(rng.normal(size=3))
    g = compose_series(f, phi, 6)
    x = rng.normal(size=10)
    assert np.allclose(g(x), f(phi(x)))


def test_compose_laurent_matches_closed_form():
    phi = wermer_series(0.3, 40)
    f = SeriesFunction.taylor([0.0, 0.0, 1.0], CIRCLE)
    g = compose_series(f, phi, 40)
    z = np.exp(1j * np.linspace(0, 2 * np.pi, 50))
    assert np.allclose(g(z), oracles.wermer_closed_form(0.3, z) ** 2, atol=1e-12)


def test_compose_laurent_needs_circle_map():
    f = SeriesFunction.laurent([1.0, 0.0], -1)
    with pytest.raises(BasisMismatchError):
        compose_series(f, SeriesFunction.taylor([0.0, 0.5]), 4)


def test_bell_numbers_from_partial_polynomials():
    n = 8
    B = bell_polynomials(n, [0] + [1.0] * n)
    for j in range(n + 1):
        assert sum(B[j][k] for k in range(j + 1)).real == oracles.bell_number(j)
    assert sum(B[6][k] for k in range(7)).real == 203


def test_faa_di_bruno_against_partition_enumeration(rng):
    for n in range(1, 7):
        fd = list(rng.normal(size=n + 1))
        pd = list(rng.normal(size=n + 1))
        expect = oracles.chain_rule_by_partitions(fd, pd, n)
        assert faa_di_bruno(fd, pd, n) == pytest.approx(expect, rel=1e-12)


def test_faa_di_bruno_requires_enough_derivatives():
    with pytest.raises(InsufficientDerivativesError):
        faa_di_bruno([1.0, 2.0], [1.0, 2.0, 3.0], 2)


def test_faa_di_bruno_vectorised(rng):
    x = rng.normal(size=5)
    f = SeriesFunction.taylor(rng.normal(size=5), INTERVAL)
    phi = SeriesFunction.taylor(rng.normal(size=4), INTERVAL)
    fd = [differentiate(f, k)(phi(x)) for k in range(5)]
    pd = [differentiate(phi, k)(x) for k in range(5)]
    got = faa_di_bruno_all(fd, pd, 4)
    g = compose_series(f, phi, 12)
    for n in range(5):
        assert np.allclose(got[n], differentiate(g, n)(x), rtol=1e-10)


def test_analyticity_index_of_wermer_matches_bessel_oracle():
    c, d = 0.2, 40
    idx = analyticity_index(wermer_series(c, d), CIRCLE, 20, 4096)
    a = oracles.wermer_bessel_coefficients(c, d)
    exps = np.arange(-d, d + 1)
    z = np.exp(2j * np.pi * np.arange(8192) / 8192)
    for k in range(1, 21):
        falling = np.array([math.prod(range(j - k + 1, j + 1)) for j in exps], dtype=float)
        sup = np.max(np.abs(np.polynomial.polynomial.polyval(z, a * falling) * z ** (-d - k)))
        ref = (sup / math.factorial(k)) ** (1 / k)
        assert idx.values[k - 1] == pytest.approx(ref, rel=2e-3)
    # the index stays <= 1 up to k = 18 and creeps just above after
    assert idx.values[:18].max() <= 1.0
    assert idx.maximum < 1.01


def test_analyticity_index_of_polynomial_is_finite():
    phi = SeriesFunction.taylor([0.25, 0.5])
    idx = analyticity_index(phi, DISC, 5)
    assert idx.values[0] == pytest.approx(0.5, abs=1e-3)
    assert np.all(idx.values[1:] == 0)


poly = st.lists(st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False),
                min_size=1, max_size=11)


@settings(max_examples=60, deadline=None, derandomize=True)
@given(poly, st.sampled_from([0.3, 0.7, 0.9j]), st.integers(0, 10))
def test_scaling_inequality(coeffs, alpha, n):
    f = SeriesFunction.taylor(coeffs, DISC)
    scale = SeriesFunction.taylor([0.0, alpha], DISC)
    g = compose_series(f, scale, f.degree)
    lhs = sup_norm(differentiate(g, n), DISC, 1024).lower
    # sampled lower end on the left, bracket upper end on the right
    rhs = abs(alpha) ** n * sup_norm(differentiate(f, n), DISC, 1024).upper
    assert lhs <= rhs * (1 + 1e-12) + 1e-9
