from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zetask.algebra import (
    ExponentRescaling,
    LaurentFraction,
    LaurentPoly,
    Poly,
    RationalFunction,
    frac_str,
    laurent_order_at,
    normalize,
    pole_order_at,
    rescale_exponents,
)

F = Fraction


def s_poly(*coeffs):
    return Poly([F(c) for c in coeffs], "s")


def w(terms):
    return LaurentPoly(terms, "w")


def t_poly(*coeffs):
    zero = LaurentPoly({}, "w")
    return Poly([c if isinstance(c, LaurentPoly) else LaurentPoly.constant(c, "w") for c in coeffs], "T", zero)


def binom(a, b):
    """1 - w^a T^b"""
    cs = [LaurentPoly.constant(1, "w")] + [LaurentPoly({}, "w")] * (b - 1) + [w({a: -1})]
    return t_poly(*cs)


# -- rationals and Laurent polynomials -------------------------------------


def test_frac_str():
    assert frac_str(F(5, 6)) == "5/6"
    assert frac_str(F(-3, 1)) == "-3"
    assert frac_str(F(0)) == "0"


def test_laurent_drops_zero_coefficients():
    p = LaurentPoly({2: 1, 0: 0, -1: F(1, 2)})
    assert p.terms == {2: F(1), -1: F(1, 2)}
    assert LaurentPoly({1: 1}) - LaurentPoly({1: 1}) == 0


def test_laurent_render():
    assert LaurentPoly({-4: 1, 0: -1}, "w").render() == "-1 + w^(-4)"
    assert LaurentPoly({2: 1, 0: -1}, "u").render() == "u^2 - 1"
    assert LaurentPoly({3: -2, 1: 1, 0: 1}, "L").render() == "-2*L^3 + L + 1"


def test_laurent_triples_round_trip():
    p = LaurentPoly({3: F(-2, 3), -1: 5}, "L")
    assert p.to_triples() == [[-1, 5, 1], [3, -2, 3]]
    assert LaurentPoly.from_triples(p.to_triples(), "L") == p


def test_rescale_examples():
    assert rescale_exponents(LaurentPoly({2: 1}), 3) == w({6: 1})
    assert rescale_exponents(LaurentPoly({-1: 1, 0: 1}), 2) == w({-2: 1, 0: 1})
    assert rescale_exponents(LaurentPoly({2: 1, 0: -1}), 1) == w({2: 1, 0: -1})
    with pytest.raises(ValueError):
        rescale_exponents(LaurentPoly({1: 1}), 0)


def test_rescalings_compose_by_multiplying():
    a = ExponentRescaling("u", "w", 2)
    b = ExponentRescaling("w", "z", 3)
    assert a.then(b).factor == 6
    p = LaurentPoly({1: 1, -2: 3}, "u")
    assert b.apply(a.apply(p)) == a.then(b).apply(p)


laurents = st.dictionaries(
    st.integers(-4, 4), st.fractions(min_value=-5, max_value=5, max_denominator=4), max_size=4
).map(lambda d: LaurentPoly(d, "u"))


@settings(max_examples=150, deadline=None)
@given(laurents, laurents, laurents)
def test_laurent_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a + (-a) == 0


@settings(max_examples=100, deadline=None)
@given(laurents, laurents, st.integers(1, 5))
def test_rescale_is_a_ring_homomorphism(a, b, D):
    assert rescale_exponents(a * b, D) == rescale_exponents(a, D) * rescale_exponents(b, D)
    assert rescale_exponents(a + b, D) == rescale_exponents(a, D) + rescale_exponents(b, D)


def test_laurent_fraction_is_canonical():
    x = LaurentFraction(w({2: 1, 0: -1}), w({1: 1, 0: -1}))  # (w^2 - 1)/(w - 1)
    assert x == LaurentFraction(w({1: 1, 0: 1}))
    assert LaurentFraction(w({3: 2}), w({1: 4})) == LaurentFraction(w({2: F(1, 2)}))


# -- rational functions over Q ---------------------------------------------


def test_normalize_cancels_and_makes_monic():
    r = normalize(RationalFunction(s_poly(2, 2), s_poly(0, 2, 2)))
    assert r.num == s_poly(1) and r.den == s_poly(0, 1)
    assert r.render() == "1/s"


def test_normalize_identity_case():
    r = normalize(RationalFunction(s_poly(1, 1), s_poly(1, 1)))
    assert r.den == s_poly(1) and r.num == s_poly(1)


def test_cusp_canonical_form():
    # (4s + 5)/((s + 1)(6s + 5)) with the leading coefficient folded into the numerator
    r = normalize(RationalFunction(s_poly(5, 4), s_poly(1, 1) * s_poly(5, 6)))
    assert r.num == s_poly(F(5, 6), F(2, 3))
    assert r.den == s_poly(F(5, 6), F(11, 6), 1)


def test_zero_denominator_rejected():
    with pytest.raises(ZeroDivisionError):
        RationalFunction(s_poly(1), s_poly())


small_polys = st.lists(st.integers(-4, 4), min_size=1, max_size=4).map(lambda cs: s_poly(*cs))
nonzero_polys = small_polys.filter(lambda p: bool(p))


@settings(max_examples=150, deadline=None)
@given(small_polys, nonzero_polys, nonzero_polys)
def test_normalize_idempotent_and_respects_equality(a, b, k):
    r = RationalFunction(a, b)
    n = normalize(r)
    assert normalize(n).num == n.num and normalize(n).den == n.den
    scaled = normalize(RationalFunction(a * k, b * k))
    assert scaled.num == n.num and scaled.den == n.den
    assert n.den.leading_coefficient() == 1


# -- pole orders over Q(w) --------------------------------------------------


def test_pole_order_examples():
    T0 = w({2: 1})
    one = t_poly(1)
    rf = RationalFunction(one, binom(-2, 1) * binom(-4, 3))
    assert pole_order_at(rf, T0) == 1
    rf2 = RationalFunction(binom(-2, 1), binom(-2, 1) * binom(-4, 3))
    assert pole_order_at(rf2, T0) == 0
    assert pole_order_at(normalize(rf2), T0) == 0
    rf3 = RationalFunction(one, binom(-2, 1) * binom(-2, 1))
    assert pole_order_at(rf3, T0) == 2


def test_pole_order_rejects_non_monomial_points():
    rf = RationalFunction(t_poly(1), binom(-2, 1))
    with pytest.raises(ValueError):
        pole_order_at(rf, w({1: 1, 0: 1}))
    with pytest.raises(ValueError):
        pole_order_at(rf, w({}))


def test_normalize_with_and_without_factor_hint_agree():
    den = binom(-4, 3) * binom(-2, 1)
    num = binom(-2, 1) * t_poly(w({1: 1}), 3)
    plain = normalize(RationalFunction(num, den))
    hinted = normalize(RationalFunction(num, den, ((binom(-4, 3), 1), (binom(-2, 1), 1))))
    assert plain.num == hinted.num and plain.den == hinted.den
    assert plain.den.leading_coefficient() == 1


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.tuples(st.integers(-6, 6), st.integers(1, 4)), min_size=1, max_size=3),
    st.integers(-3, 3),
)
def test_pole_order_shift_property(factors, k):
    """order(rf * (T - T0)) = order(rf) - 1 while the left side is a pole."""
    den = t_poly(1)
    for a, e in factors:
        den = den * binom(a, e)
    rf = RationalFunction(t_poly(1), den)
    T0 = w({k: 1})
    order = laurent_order_at(rf, T0)
    shifted = RationalFunction(t_poly(w({k: -1}), 1), den)  # (T - T0)/den
    assert laurent_order_at(shifted, T0) == order - 1
    if order >= 1:
        assert pole_order_at(shifted, T0) == order - 1
