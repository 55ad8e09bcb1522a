import json
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tcarith.catalan import catalan
from tcarith.errors import ConvergenceDomainError, PreconditionError, ShapeError
from tcarith.lif import (
    LifSeries, PartialSumCertificate, bound_ratios, check_inverse_recurrence,
    coefficient_bound_holds, lif_coefficients, partial_sum_root, recurrence_coefficients,
    tail_bound, terms_needed,
)
from tcarith.poly import Polynomial
from corpus import admissible_polys, random_lif_polys
from oracles import root_nearest_zero, series_reversion


def oracle_root(h: Polynomial) -> F:
    z0, z1 = root_nearest_zero(h.coeffs)
    return (z0 + z1) / 2


def test_catalan_inverse():
    s = lif_coefficients(Polynomial([0, 1, -1]), 20)
    assert list(s.coeffs[:4]) == [1, 1, 2, 5]
    assert list(s.coeffs) == [catalan([n - 1]) for n in range(1, 21)]
    assert all(b > 0 for b in s.coeffs)
    assert check_inverse_recurrence(lif_coefficients(Polynomial([0, 1, -1]), 12))


def test_identity_inverse():
    s = lif_coefficients(Polynomial([0, 1]), 9)
    assert list(s.coeffs) == [1] + [0] * 8
    assert check_inverse_recurrence(s)
    assert coefficient_bound_holds(s)


def test_cubic_against_reversion():
    f = Polynomial([0, 1, 1, 1])
    s = lif_coefficients(f, 10)
    assert list(s.coeffs) == series_reversion(f.coeffs, 10) == recurrence_coefficients(f, 10)
    assert check_inverse_recurrence(s)


@pytest.mark.parametrize("f", random_lif_polys(7, 6), ids=str)
def test_random_degree_four(f):
    s = lif_coefficients(f, 8)
    assert check_inverse_recurrence(s)
    assert list(s.coeffs) == series_reversion(f.coeffs, 8)
    assert coefficient_bound_holds(s)


def test_recurrence_check_detects_tampering():
    s = lif_coefficients(Polynomial([0, 1, 2]), 6)
    bad = LifSeries(s.f, s.coeffs[:3] + (s.coeffs[3] + 1,) + s.coeffs[4:], s.a)
    assert not check_inverse_recurrence(bad)
    assert not check_inverse_recurrence(LifSeries(s.f, (F(2),), s.a))


@given(st.integers(1, 5), st.integers(-3, 3))
def test_positive_signs_for_x_minus_ax2(num, den_shift):
    a = F(num, 2 ** (den_shift + 3))
    s = lif_coefficients(Polynomial([0, 1, -a]), 12)
    assert all(b > 0 for b in s.coeffs)


def test_ratio_table_decays_slowly():
    ratios = bound_ratios(lif_coefficients(Polynomial([0, 1, -1]), 40))
    assert ratios[0] == 1
    assert all(later < earlier for earlier, later in zip(ratios[1:], ratios[2:]))
    # C_{n-1} / 4^(n-1) behaves like n^(-3/2): polynomial, not geometric
    assert ratios[39] * 40 ** 2 > 1


def test_shape_errors():
    with pytest.raises(ShapeError):
        lif_coefficients(Polynomial([0, 2, 1]), 3)
    with pytest.raises(ShapeError):
        lif_coefficients(Polynomial([1, 1, 1]), 3)
    with pytest.raises(ShapeError):
        partial_sum_root(Polynomial([F(1, 100), 3]), 3)
    with pytest.raises(PreconditionError):
        partial_sum_root(Polynomial([F(1, 100), 1]), 0)


def test_convergence_domain():
    with pytest.raises(ConvergenceDomainError):
        partial_sum_root(Polynomial([F(1, 4), 1, 1]), 5)
    with pytest.raises(ConvergenceDomainError):
        partial_sum_root(Polynomial([F(-1, 8), 1, 1, 1]), 5)


def test_quadratic_example_converges_to_oracle():
    h = Polynomial([F(-1, 8), 1, 1])
    rho = oracle_root(h)
    assert 0 < rho < 1
    assert rho * rho + rho - F(1, 8) < F(1, 2 ** 70)
    for n in range(1, 31):
        x_n, cert = partial_sum_root(h, n)
        assert cert.alpha == F(1, 2)
        assert abs(x_n - rho) <= F(1, 8) * F(1, 2) ** (n - 1) / F(1, 2) + F(1, 2 ** 79)


@given(st.fractions(min_value=F(-249, 1000), max_value=F(249, 1000), max_denominator=1000),
       st.integers(1, 6))
def test_linear_case(a0, n):
    h = Polynomial([a0, 1])
    x_n, cert = partial_sum_root(h, n)
    assert x_n == -a0 and h(x_n) == 0


def test_cubic_residual_bound():
    h = Polynomial([F(1, 100), 1, 1, 1])
    for n in range(1, 31):
        x_n, cert = partial_sum_root(h, n)
        assert cert.alpha == F(2, 25) and cert.degree == 3
        assert abs(h(x_n)) <= F(n) ** 3 * F(1, 100) * F(2, 25) ** n
        assert all(cert.checks.values())


@pytest.mark.parametrize("h", admissible_polys(5, 6), ids=str)
def test_admissible_corpus_bounds(h):
    rho = oracle_root(h)
    for n in (1, 2, 5, 10, 15):
        x_n, cert = partial_sum_root(h, n)
        assert abs(x_n) <= cert.modulus_bound
        assert abs(x_n - cert.x_next) <= cert.tail_bound
        assert cert.residual <= cert.residual_bound
        assert abs(x_n - rho) <= cert.tail_bound + F(1, 2 ** 79)


def test_terms_needed_is_least():
    a0, alpha = F(1, 10), F(2, 5)
    for k in range(1, 40):
        target = F(1, 2 ** k)
        n = terms_needed(a0, alpha, target)
        assert tail_bound(a0, alpha, n) < target
        assert n == 1 or tail_bound(a0, alpha, n - 1) >= target


def test_json_round_trips():
    s = lif_coefficients(Polynomial([0, 1, F(-1, 3), 2]), 7)
    assert LifSeries.from_json(json.loads(json.dumps(s.to_json()))) == s
    _, cert = partial_sum_root(Polynomial([F(1, 50), 1, F(1, 2)]), 6)
    assert PartialSumCertificate.from_json(json.loads(json.dumps(cert.to_json()))) == cert


@given(st.integers(0, 10 ** 6))
@settings(max_examples=15, deadline=None)
def test_closed_form_equals_recurrence_random(seed):
    f = random_lif_polys(seed, 1)[0]
    assert list(lif_coefficients(f, 9).coeffs) == recurrence_coefficients(f, 9)
