from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boettcher.polynomial import RationalPolynomial, eval_mahler, is_integer_valued, mahler_expansion
from boettcher.series import (
    QQt,
    SeriesError,
    TruncatedSeries,
    compose,
    format_series,
    nth_root,
    pow_int,
    reversion,
    substitute_power,
    truncate,
)

import oracles

F = Fraction
rationals = st.fractions(min_value=-20, max_value=20, max_denominator=6)


def S(*coeffs, order=None):
    return TruncatedSeries([F(c) for c in coeffs], order=order)


@st.composite
def series(draw, min_order=1, max_order=10, constant=None, tangent=False):
    n = draw(st.integers(min_order, max_order))
    c = draw(st.lists(rationals, min_size=n + 1, max_size=n + 1))
    if constant is not None:
        c[0] = F(constant)
    if tangent:
        c[0], c[1] = F(0), F(1)
    return TruncatedSeries(c)


# -- examples ------------------------------------------------------------------------


def test_add_examples():
    x = TruncatedSeries.x(3)
    assert (x + x).coeffs == (0, 2, 0, 0)
    f = S(0, 1, -1, order=2)
    assert f + S(0, order=2) == f
    total = S(0, 1, -1, 5, order=3) + S(0, 0, 1, order=2)
    assert total.coeffs == (0, 1, 0) and total.order == 2


def test_mul_examples():
    assert (S(1, 1, order=2) * S(1, -1, order=2)).coeffs == (1, 0, -1)
    f = S(3, 1, 4, order=2)
    assert f * TruncatedSeries.constant(1, 2) == f
    geom = TruncatedSeries([0] + [1] * 4)  # x/(1-x) to order 4
    assert (geom * geom).coeffs == (0, 0, 1, 2, 3)


def test_coeff_and_truncate():
    f = S(0, 1, -1, 2)
    assert f.coeff(3) == 2
    assert f.coeff(0) == 0
    with pytest.raises(SeriesError, match="unknown coefficient"):
        f.coeff(4)
    assert truncate(f, 1).coeffs == (0, 1)
    assert truncate(f, 3) == f
    g = TruncatedSeries(range(8))
    assert truncate(truncate(g, 5), 3).coeffs == truncate(g, 3).coeffs
    with pytest.raises(SeriesError):
        truncate(f, 4)


def test_compose_examples():
    f = S(0, 1, -1, 2, order=3)
    assert compose(f, TruncatedSeries.x(3)) == f
    sq = S(0, 0, 1, order=4)
    assert compose(sq, S(0, 1, 1, order=4)).coeffs == (0, 0, 1, 2, 1)
    g = S(0, 1, -1, order=4)
    # x - x^2 - (x - x^2)^2 = x - 2x^2 + 2x^3 - x^4
    got = compose(g, g)
    assert got.coeffs == (0, 1, -2, 2, -1)
    assert list(got.coeffs) == oracles.poly_compose([0, 1, -1], [0, 1, -1], 4)


def test_compose_requires_zero_constant():
    with pytest.raises(SeriesError, match="composition requires g\\(0\\)=0"):
        compose(S(0, 1, order=3), S(1, 1, order=3))


def test_pow_examples():
    assert pow_int(S(1, 1, order=3), 3).coeffs == (1, 3, 3, 1)
    f = S(2, 5, 7)
    assert pow_int(f, 1) == f
    assert pow_int(S(0, 1, 1, order=4), 2).coeffs == (0, 0, 1, 2, 1)


def test_nth_root_examples():
    assert nth_root(TruncatedSeries.constant(1, 4), 5).coeffs == (1, 0, 0, 0, 0)
    assert nth_root(S(1, 2, 1, order=2), 2).coeffs == (1, 1, 0)
    r = nth_root(S(1, 1, order=2), 2)
    assert r.coeffs == (1, F(1, 2), F(-1, 8))
    assert (r * r).coeffs == (1, 1, 0)
    with pytest.raises(SeriesError):
        nth_root(S(2, 1, order=2), 2)
    with pytest.raises(SeriesError):
        nth_root(S(1, 1, order=2), 0)


def test_reversion_examples():
    x = TruncatedSeries.x(5)
    assert reversion(x) == x
    assert reversion(S(0, 1, 1, order=3)).coeffs == (0, 1, -1, 2)
    geom = TruncatedSeries([0, 1, 1, 1, 1])
    assert reversion(geom).coeffs == (0, 1, -1, 1, -1)
    with pytest.raises(SeriesError, match="tangent-to-identity"):
        reversion(S(0, 2, 1, order=3))
    with pytest.raises(SeriesError, match="tangent-to-identity"):
        reversion(S(1, 1, order=3))


def test_substitute_power_examples():
    assert substitute_power(S(0, 1, -1), 2).coeffs == (0, 0, 1, 0, -1)
    f = S(1, 2, 3)
    assert substitute_power(f, 1) == f
    assert substitute_power(S(1, 1, 1), 3).coeffs == (1, 0, 0, 1, 0, 0, 1)


def test_format_series():
    assert format_series(S(0, 1, -1, F(7, 2))) == "x - x^2 + 7/2*x^3 + O(x^4)"


def test_series_is_immutable():
    f = S(0, 1)
    with pytest.raises(AttributeError):
        f.coeffs = (1,)


# -- polynomials in t --------------------------------------------------------------


def test_mahler_expansion_examples():
    t = RationalPolynomial.t()
    p = (231 * t**4 - 30 * t**3 + 9 * t**2 - 2 * t) / 8
    assert mahler_expansion(p) == [0, 26, 384, 1017, 693]
    assert mahler_expansion(RationalPolynomial((F(5, 3),))) == [F(5, 3)]
    assert mahler_expansion(t * t) == [0, 1, 2]
    assert str(p) == "(231*t^4 - 30*t^3 + 9*t^2 - 2*t)/8"


def test_polynomial_canonical_form():
    assert RationalPolynomial((1, 2, 0, 0)).coeffs == (1, 2)
    assert RationalPolynomial((0, 0)).degree == -1
    assert RationalPolynomial((3,)) == 3


@given(st.lists(rationals, min_size=1, max_size=6))
def test_mahler_expansion_reproduces_values(coeffs):
    p = RationalPolynomial(coeffs)
    d = mahler_expansion(p)
    for n in range(max(p.degree, 0) + 3):
        assert eval_mahler(d, n) == p(n)


@given(st.lists(st.integers(-30, 30), min_size=1, max_size=6))
def test_integer_polynomials_are_integer_valued(coeffs):
    assert is_integer_valued(RationalPolynomial(coeffs))


def test_half_t_is_not_integer_valued():
    assert not is_integer_valued(RationalPolynomial.t() / 2)


def test_series_over_qt_specializes():
    t = RationalPolynomial.t()
    f = TruncatedSeries([0, 1, t, t * t], QQt)
    g = pow_int(f, 2)
    assert g.specialize(3).coeffs == pow_int(f.specialize(3), 2).coeffs


# -- properties -------------------------------------------------------------------


@given(series(), series(), series())
def test_ring_axioms(f, g, h):
    assert (f + g) + h == f + (g + h)
    assert f * g == g * f
    assert f * (g + h) == f * g + f * h
    assert (f * g).order == min(f.order, g.order)


@given(series(), series())
def test_mul_matches_naive_product(f, g):
    n = min(f.order, g.order)
    assert list((f * g).coeffs) == oracles.poly_mul(f.coeffs[: n + 1], g.coeffs[: n + 1], n)


@given(series(max_order=7), series(max_order=7, constant=0))
def test_compose_matches_naive_expansion(f, g):
    n = min(f.order, g.order)
    assert list(compose(f, g).coeffs) == oracles.poly_compose(list(f.coeffs), list(g.coeffs), n)


@settings(max_examples=40)
@given(series(max_order=6), series(max_order=6, constant=0), series(max_order=6, constant=0))
def test_compose_associative(f, g, h):
    assert compose(f, compose(g, h)) == compose(compose(f, g), h)


@settings(max_examples=40, deadline=None)
@given(series(min_order=2, max_order=40, tangent=True))
def test_reversion_round_trip(f):
    g = reversion(f)
    x = TruncatedSeries.x(f.order)
    assert compose(f, g) == x
    assert compose(g, f) == x


@given(series(max_order=12, constant=1), st.integers(1, 6))
def test_nth_root_consistency(f, m):
    assert pow_int(nth_root(f, m), m) == f


@given(series(max_order=8), st.integers(0, 5))
def test_pow_matches_repeated_product(f, n):
    assert list(pow_int(f, n).coeffs) == oracles.poly_pow(f.coeffs, n, f.order)
