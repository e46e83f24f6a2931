from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from wmin.arith import (QSeries, divide_by_binomial, expand_inverse_factor, product_of_binomials, rat,
                        set_monomial_limit, get_monomial_limit)

ORDER = Fraction(6)

coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4)
qexps = st.integers(min_value=0, max_value=11).map(lambda k: Fraction(k, 2))
mono2 = st.tuples(st.integers(-3, 3), st.integers(-3, 3))


@st.composite
def series(draw, nvars=2, order=ORDER):
    terms = draw(st.dictionaries(st.tuples(qexps, mono2 if nvars == 2 else st.tuples(st.integers(-3, 3))),
                                 coeffs, max_size=6))
    return QSeries.from_terms(nvars, terms, order=order, offset=0)


def test_rat_parses_fractions():
    assert rat("3/4") == Fraction(3, 4)
    assert rat("-2") == -2
    assert rat(5) == 5
    with pytest.raises(ValueError):
        rat("")
    with pytest.raises(ValueError):
        rat("1/x")


@given(series(), series())
def test_addition_commutes(a, b):
    assert a + b == b + a


@given(series(), series(), series())
def test_multiplication_associative_and_distributive(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@given(series(), coeffs, st.integers(1, 8).map(lambda k: Fraction(k, 2)), mono2)
def test_div_binomial_inverts_mul_binomial(a, c, b, e):
    assert a.mul_binomial(c, b, e).div_binomial(c, b, e) == a


@given(st.sampled_from([1, -1]), mono2.filter(any), series())
def test_divide_by_q0_binomial(c, e, a):
    assert divide_by_binomial(a.mul_binomial(c, 0, e), c, e) == a


@given(coeffs.filter(bool), st.integers(1, 6).map(lambda k: Fraction(k, 2)), mono2)
def test_expand_inverse_factor_is_an_inverse(c, b, e):
    inv = expand_inverse_factor(c, b, e, ORDER)
    one = QSeries.one(2, ORDER)
    assert inv.mul_binomial(c, b, e) == one


def test_inverse_factor_with_negative_exponent():
    # 1/(1 - q^-1 x) = -q x^-1 / (1 - q x^-1)
    inv = expand_inverse_factor(-1, -1, (1,), 5)
    assert inv.mul_binomial(-1, -1, (1,)).first_mismatch(QSeries.one(1, 5), 4) is None
    assert inv.coeff(1).terms == {(-1,): -1}


@given(series(), series())
def test_first_mismatch_is_none_iff_equal(a, b):
    assert (a.first_mismatch(b) is None) == (a == b)
    if a != b:
        q, e, x, y = a.first_mismatch(b)
        assert x != y


def test_negative_control_detects_first_mismatch():
    a = product_of_binomials(0, [(-1, j, ()) for j in range(1, 12)], 12)
    b = a + QSeries.monomial(0, 1, (), 1, 12)
    q, e, x, y = a.first_mismatch(b)
    assert q == 1 and e == () and x == -1 and y == 0


@given(series())
def test_json_round_trip(a):
    assert QSeries.from_json(2, a.to_json()) == a


def test_monomial_limit_round_trip():
    old = get_monomial_limit()
    try:
        set_monomial_limit(10)
        assert get_monomial_limit() == 10
        with pytest.raises(ValueError):
            set_monomial_limit(0)
    finally:
        set_monomial_limit(old)


def test_nvars_zero_series():
    phi = product_of_binomials(0, [(-1, j, ()) for j in range(1, 13)], 13)
    # Euler's pentagonal numbers up to q^12
    expect = [1, -1, -1, 0, 0, 1, 0, 1, 0, 0, 0, 0, -1]
    assert [phi.coeff(j).terms.get((), 0) for j in range(13)] == expect
