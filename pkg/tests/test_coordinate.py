from fractions import Fraction
from math import factorial, gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boettcher.coordinate import (
    CoefficientGrowthError,
    GermError,
    GermSpec,
    Normalization,
    ak_decomposition,
    bottcher_coordinate,
    bottcher_limit_inverse,
    bottcher_limit_oracle,
    denormalize,
    germ_from_coordinate,
    inverse_bottcher_direct,
    normalize,
    normalize_series,
)
from boettcher.polynomial import RationalPolynomial, is_integer_valued
from boettcher.series import QQt, SeriesError, TruncatedSeries, compose, pow_int, reversion

import oracles

F = Fraction
TABLE_M2 = [0, 1, -1, 2, -7, 26, -98]


@st.composite
def germs(draw, m_min=2, m_max=6, bound=20, extra=4):
    m = draw(st.integers(m_min, m_max))
    tail = draw(st.lists(st.integers(-bound, bound), min_size=0, max_size=extra))
    return GermSpec(m, tuple([1] + tail))


# -- examples ------------------------------------------------------------------


def test_table_rows():
    assert list(bottcher_coordinate(GermSpec.family(2), 6).f.coeffs) == TABLE_M2
    assert list(bottcher_coordinate(GermSpec.family(3), 5).f.coeffs) == [0, 1, -1, 3, -12, 52]
    assert list(bottcher_coordinate(GermSpec.family(4), 5).f.coeffs) == [0, 1, -1, F(7, 2), -16, F(661, 8)]


@pytest.mark.parametrize("m", [2, 3, 7])
def test_pure_power_is_fixed(m):
    res = bottcher_coordinate(GermSpec(m, (1,)), 8)
    assert res.f == TruncatedSeries.x(8)
    assert res.f_inv == TruncatedSeries.x(8)
    assert inverse_bottcher_direct(GermSpec(m, (1,)), 8) == TruncatedSeries.x(8)
    assert bottcher_limit_oracle(GermSpec(m, (1,)), 8, 4) == TruncatedSeries.x(8)


def test_germ_validation():
    with pytest.raises(GermError):
        GermSpec(1, (1, 2))
    with pytest.raises(GermError):
        GermSpec(2, (2, 1))
    assert GermSpec(3, (1, 0, 5, 0, 0)).b == (1, 0, 5)


def test_inverse_direct_satisfies_functional_equation():
    germ = GermSpec.family(2)
    F_ = inverse_bottcher_direct(germ, 4)
    top = 5
    lhs = oracles.poly_compose(list(F_.coeffs) + [0], list(germ.series(top).coeffs), top)
    rhs = oracles.poly_pow(list(F_.coeffs) + [0], 2, top)
    assert lhs == rhs


def test_inverse_direct_is_reversion_of_table_row():
    f = TruncatedSeries(TABLE_M2)
    assert inverse_bottcher_direct(GermSpec.family(2), 6) == reversion(f)


def test_limit_oracle_examples():
    assert list(bottcher_limit_oracle(GermSpec.family(2), 6, 3).coeffs) == TABLE_M2
    g3 = GermSpec.family(3)
    assert bottcher_limit_oracle(g3, 4, 2) == bottcher_coordinate(g3, 4).f


def test_limit_converges_to_the_inverse():
    germ = GermSpec.family(2)
    assert bottcher_limit_inverse(germ, 6, 3) == bottcher_coordinate(germ, 6).f_inv


def test_limit_needs_enough_iterations():
    with pytest.raises(SeriesError, match="insufficient iterations"):
        bottcher_limit_oracle(GermSpec.family(2), 8, 3)


def test_germ_from_coordinate_examples():
    assert germ_from_coordinate(TruncatedSeries.x(5), 2) == TruncatedSeries([0, 0, 1], order=6)
    phi = germ_from_coordinate(TruncatedSeries(TABLE_M2), 2)
    assert phi.order == 7
    assert list(phi.coeffs) == [0, 0, 1, 2, 0, 0, 0, 0]


@settings(max_examples=20, deadline=None)
@given(st.lists(st.integers(-9, 9), min_size=9, max_size=9))
def test_germ_from_coordinate_round_trip(tail):
    f = TruncatedSeries([0, 1] + tail)
    phi = germ_from_coordinate(f, 3)
    germ = GermSpec.from_series(phi, 3)
    assert bottcher_coordinate(germ, 10).f == f


def test_normalization_examples():
    res = bottcher_coordinate(GermSpec.family(3), 9)
    n = normalize(res, Normalization.OVER_K_FACTORIAL)
    assert list(n.a[:4]) == [1, -1, 6, -72]
    assert n.all_integral
    trivial = normalize(bottcher_coordinate(GermSpec(5, (1,)), 6), "raw")
    assert list(trivial.a) == [1, 0, 0, 0, 0, 0]
    a4 = normalize(bottcher_coordinate(GermSpec.family(4), 5), "over_k_factorial").a
    assert a4[2] == 7 and a4[4] == F(661, 8) * 24


@given(st.lists(st.fractions(max_denominator=9), min_size=1, max_size=8), st.integers(2, 5))
def test_normalization_reconstruction(a, m):
    a = [F(1)] + a
    for mode in Normalization:
        f = denormalize(a, mode, m)
        assert list(normalize_series(f, mode, m).a) == a


def test_parametric_family_matches_known_expansions():
    t = RationalPolynomial.t()
    f2 = bottcher_coordinate(GermSpec.parametric_family(2), 5, with_inverse=False).f
    assert f2.coeffs[5] == (231 * t**4 - 30 * t**3 + 9 * t**2 - 2 * t) / 8
    f3 = bottcher_coordinate(GermSpec.parametric_family(3), 6, with_inverse=False).f
    expected = [0, 1, -t, 3 * t**2, -(35 * t**3 + t) / 3, (154 * t**4 + 2 * t**2) / 3, -(243 * t**5 + 3 * t**3)]
    assert list(f3.coeffs) == expected


@pytest.mark.parametrize("p", [2, 3])
def test_parametric_coefficients_are_integer_valued(p):
    f = bottcher_coordinate(GermSpec.parametric_family(p), 8).f
    assert all(is_integer_valued(c) for c in f.coeffs)


@pytest.mark.parametrize("t0", [-3, 0, 1, 2, 5])
def test_specialization_commutes(t0):
    germ = GermSpec.parametric_family(3)
    generic = bottcher_coordinate(germ, 7)
    special = bottcher_coordinate(germ.specialize(t0), 7)
    assert generic.f.specialize(t0) == special.f
    assert generic.f_inv.specialize(t0) == special.f_inv


def test_digit_guard():
    with pytest.raises(CoefficientGrowthError):
        bottcher_coordinate(GermSpec.family(10), 40, max_coeff_digits=5)


def test_ak_decomposition():
    a = normalize(bottcher_coordinate(GermSpec.family(4, 4), 12), "over_k_factorial").a
    A, B, C = ak_decomposition(2, 0, 1, a[:1])
    assert A - B - C == -1
    for k in range(2, 12):
        A, B, C = ak_decomposition(2, 0, k, a[:k])
        assert A - B - C == a[k]
    a3 = normalize(bottcher_coordinate(GermSpec.family(9, 9), 4), "over_k_factorial").a
    A, B, C = ak_decomposition(3, 0, 3, a3[:3])
    assert (A - B - C) == a3[3] and int(a3[3]) % 3 == int(a3[1]) % 3 == 2
    with pytest.raises(ValueError):
        ak_decomposition(2, 0, 5, a[:3])


# -- properties --------------------------------------------------------------------


@settings(max_examples=40, deadline=None)
@given(germs(), st.integers(1, 14))
def test_defining_equation_against_naive_oracle(germ, order):
    res = bottcher_coordinate(germ, order)
    assert res.verified_order == germ.m + order - 1
    assert oracles.bottcher_equation_holds(germ.m, germ.b, res.f.coeffs, res.verified_order)
    x = TruncatedSeries.x(order)
    assert compose(res.f, res.f_inv) == x


@settings(max_examples=20, deadline=None)
@given(germs(), st.integers(1, 8), st.integers(1, 8))
def test_orders_are_consistent(germ, n1, extra):
    short = bottcher_coordinate(germ, n1, with_inverse=False).f
    long = bottcher_coordinate(germ, n1 + extra, with_inverse=False).f
    assert long.coeffs[: n1 + 1] == short.coeffs


@settings(max_examples=20, deadline=None)
@given(germs(m_max=9, bound=50, extra=5), st.integers(2, 16))
def test_three_constructions_agree(germ, order):
    n = 1
    while germ.m**n <= order:
        n += 1
    f = bottcher_coordinate(germ, order, with_inverse=False).f
    assert bottcher_limit_oracle(germ, order, n) == f
    assert reversion(inverse_bottcher_direct(germ, order)) == f


@settings(max_examples=15, deadline=None)
@given(germs(m_max=9, bound=50, extra=5), st.integers(2, 25))
def test_mk_factorial_normalization_integral(germ, order):
    res = bottcher_coordinate(germ, order)
    assert normalize(res, Normalization.OVER_MK_K_FACTORIAL).all_integral
    assert normalize(res, Normalization.OVER_MK_K_FACTORIAL, inverse=True).all_integral


@settings(max_examples=15, deadline=None)
@given(st.integers(2, 9), st.lists(st.integers(-50, 50), min_size=1, max_size=5), st.integers(2, 25))
def test_k_factorial_normalization_integral(m, tail, order):
    b = [1] + [c * (m // gcd(m, factorial(k))) if k < m else c for k, c in enumerate(tail, start=1)]
    res = bottcher_coordinate(GermSpec(m, tuple(b)), order)
    assert normalize(res, Normalization.OVER_K_FACTORIAL).all_integral
    assert normalize(res, Normalization.OVER_K_FACTORIAL, inverse=True).all_integral


@settings(max_examples=15, deadline=None)
@given(st.sampled_from([2, 3, 5]), st.lists(st.integers(-50, 50), min_size=1, max_size=5))
def test_prime_degree_germs_are_p_integral(p, tail):
    germ = GermSpec(p, tuple([1] + [p * c for c in tail]))
    res = bottcher_coordinate(germ, 30)
    for s in (res.f, res.f_inv):
        assert all(c.denominator % p for c in s.coeffs)
