from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quivsheaf.exactalg import (
    GComparison,
    NonPositiveLeading,
    Order,
    RatPoly,
    ZeroInput,
    format_rational,
    gieseker_by_normalized,
    gieseker_by_scaled,
    gieseker_by_sigma,
    gieseker_compare,
    is_proportional,
    lex_compare,
    rat,
    sigma_p,
)

from strategies import polys, positive_polys, positive_rationals, rationals

t = RatPoly.t()
one = RatPoly.const(1)


def test_rational_serialization():
    assert format_rational(Fraction(6, 4)) == "3/2"
    assert format_rational(Fraction(-4, 2)) == "-2"
    assert rat("-3/6") == Fraction(-1, 2)
    assert RatPoly.from_json(["1", "3/2", "1/2"]).to_json() == ["1", "3/2", "1/2"]


def test_zero_polynomial_degree_is_not_an_integer():
    z = RatPoly([0, 0])
    assert z.is_zero()
    assert z.degree == float("-inf")
    assert not isinstance(z.degree, int)


def test_trailing_zeros_stripped():
    assert RatPoly([1, 2, 0, 0]).coeffs == (1, 2)
    assert RatPoly([1, 2, 0]).degree == 1


@pytest.mark.parametrize("p, q, expected", [
    (t * t, t * t, Order.EQUAL),
    (t * t + 1, t * t, Order.GREATER),
    (2 * t, t + 5, Order.GREATER),
])
def test_lex_compare_examples(p, q, expected):
    assert lex_compare(p, q) is expected


@pytest.mark.parametrize("p, q, expected", [
    (t * t, t, GComparison.STRICTLY_LESS),
    (3 * t + 3, t + 1, GComparison.EQUIVALENT),
    (t * t + t, t * t + 2 * t, GComparison.STRICTLY_LESS),
])
def test_gieseker_examples(p, q, expected):
    assert gieseker_compare(p, q, cross_check=True) is expected


def test_gieseker_rejects_nonpositive_leading():
    with pytest.raises(NonPositiveLeading):
        gieseker_compare(-t, t)
    with pytest.raises(NonPositiveLeading):
        gieseker_compare(t, RatPoly())


def test_sigma_examples():
    p = t * t + 3 * t - 2
    assert sigma_p(p, p).is_zero()
    assert sigma_p(t, one) == -1
    assert sigma_p(t * t, t) == -(t * t)


def test_proportional_examples():
    assert is_proportional(t + 1, 2 * t + 2)
    assert not is_proportional(t + 1, t + 2)
    assert is_proportional(-t - 1, 3 * t + 3)
    with pytest.raises(ZeroInput):
        is_proportional(RatPoly(), t)


def test_shift_and_eval():
    p = t * t + 3 * t
    assert p.shift(2) == (t + 2) * (t + 2) + 3 * (t + 2)
    assert p(Fraction(1, 2)) == Fraction(7, 4)


@given(polys(), polys(), polys())
def test_ring_axioms(p, q, r):
    assert (p + q) * r == p * r + q * r
    assert p * q == q * p
    assert (p - p).is_zero()


@given(positive_polys(), positive_polys())
@settings(max_examples=300)
def test_three_characterizations_agree(p, q):
    v = gieseker_by_sigma(p, q)
    assert gieseker_by_normalized(p, q) is v
    assert gieseker_by_scaled(p, q) is v
    assert (v is GComparison.EQUIVALENT) == is_proportional(p, q)


@given(positive_polys(), positive_polys(), positive_polys())
@settings(max_examples=300)
def test_preorder_total_and_transitive(p, q, r):
    def leq(a, b):
        return gieseker_compare(a, b) is not GComparison.STRICTLY_GREATER

    assert leq(p, q) or leq(q, p)
    if leq(p, q) and leq(q, r):
        assert leq(p, r)


@given(polys(), polys(), polys(), rationals, rationals)
def test_sigma_bilinear_alternating(p, q, r, a, b):
    assert sigma_p(p, q) == -sigma_p(q, p)
    assert sigma_p(p * a + q * b, r) == sigma_p(p, r) * a + sigma_p(q, r) * b


@st.composite
def upper_triangular(draw, n):
    rows = []
    for i in range(n):
        rows.append([Fraction(0)] * i + [draw(positive_rationals)] + draw(st.lists(rationals, min_size=n - i - 1, max_size=n - i - 1)))
    return rows


@given(st.integers(0, 4).flatmap(lambda d: st.tuples(st.just(d), upper_triangular(d + 1),
                                                    st.lists(rationals, min_size=d + 1, max_size=d + 1),
                                                    st.lists(rationals, min_size=d + 1, max_size=d + 1))))
def test_upper_triangular_mixing_preserves_sign(data):
    d, M, a, b = data
    # new coefficient i is a combination of coefficients of degree >= i
    mix = lambda c: RatPoly(sum(M[i][j] * c[j] for j in range(d + 1)) for i in range(d + 1))
    assert sigma_p(RatPoly(a), RatPoly(b)).sign() == sigma_p(mix(a), mix(b)).sign()
