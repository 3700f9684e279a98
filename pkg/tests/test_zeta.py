from __future__ import annotations

from fractions import Fraction as F
from math import lcm

import pytest
import sympy as sp
from shapes import point, vertex

from zetask.algebra import LaurentPoly, Poly, RationalFunction
from zetask.complex import HYPERSURFACE, build_complex
from zetask.zeta import (
    ZetaExpression,
    ZetaInputError,
    ZetaTerm,
    candidate_poles,
    evaluate_topological,
    expanded,
    leading_coefficient_at,
    naive_zeta_specialized,
    pole_spectrum,
    render_naive,
    render_topological,
    rescale_factor,
    topological_expression,
    topological_zeta,
)

s, u, w, T, e, h = sp.symbols("s u w T e h")
HYPER = ["smooth", "monomial", "cusp", "nodal-line", "f3", "f4", "f5", "x2y2"]


def to_sympy_s(rf: RationalFunction):
    num = sum(sp.Rational(c.numerator, c.denominator) * s**i for i, c in enumerate(rf.num.coeffs))
    den = sum(sp.Rational(c.numerator, c.denominator) * s**i for i, c in enumerate(rf.den.coeffs))
    return num / den


def laurent_sym(p: LaurentPoly, var):
    return sp.S(sum(sp.Rational(c.numerator, c.denominator) * var**k for k, c in p.terms.items()))


def to_sympy_T(rf: RationalFunction):
    def coeff(c):
        return laurent_sym(c.num, w) / laurent_sym(c.den, w) if hasattr(c, "den") else laurent_sym(c, w)

    num = sum(coeff(c) * T**i for i, c in enumerate(rf.num.coeffs))
    den = sum(coeff(c) * T**i for i, c in enumerate(rf.den.coeffs))
    return num / den


def cell_poincare_sym(cell):
    if cell.poincare_over_x is not None:
        return laurent_sym(cell.poincare_over_x, u)
    return laurent_sym(cell.class_over_x, u**2)


def direct_topological(c):
    """Sum chi * prod 1/(N s + nu) straight from the cell data."""
    total = 0
    for cell in c.cells:
        if c.is_over_x(cell) and cell.chi_over_x:
            term = sp.Integer(cell.chi_over_x)
            for v in cell.vertices:
                d = c.vertex_map[v]
                term /= d.N * s + d.nu
            total += term
    return sp.cancel(total)


def direct_naive(c):
    """Naive zeta in u and T, before any rescaling."""
    total = 0
    for cell in c.cells:
        if not c.is_over_x(cell):
            continue
        term = (u**2 - 1) ** len(cell.vertices) * cell_poincare_sym(cell)
        for v in cell.vertices:
            d = c.vertex_map[v]
            x = u ** (-2 * d.nu) * T**d.N
            term *= x / (1 - x)
        total += term
    return total


def oracle_order(expr_uT, s0: F) -> int:
    """Pole order in T at T0 = u^(-2 s0), over QQ(w) with u = w^q."""
    q = s0.denominator
    f = sp.cancel(sp.together(expr_uT.subs(u, w**q)))
    T0 = w ** int(-2 * q * s0)
    num, den = sp.fraction(f)

    def mult(p):
        poly = sp.Poly(sp.expand(p.subs(T, T0 * (1 + e))), e)
        coeffs = list(reversed(poly.all_coeffs()))
        return next(i for i, c in enumerate(coeffs) if sp.simplify(c) != 0)

    return max(mult(den) - mult(num), 0)


# -- topological ------------------------------------------------------------


def test_smooth_and_monomial_closed_forms(fixtures):
    assert render_topological(topological_zeta(fixtures("smooth"))) == "1/(s + 1)"
    assert render_topological(topological_zeta(fixtures("monomial"))) == "1/((2*s + 1)*(3*s + 1))"


def test_cusp_closed_form(fixtures):
    z = topological_zeta(fixtures("cusp"))
    assert render_topological(z) == "(4*s + 5)/((s + 1)*(6*s + 5))"
    assert z.num == Poly((F(5, 6), F(2, 3)), "s")
    assert z.den == Poly((F(5, 6), F(11, 6), 1), "s")
    assert expanded(z) == "(2/3*s + 5/6)/(s^2 + 11/6*s + 5/6)"


@pytest.mark.parametrize("name", HYPER)
def test_topological_matches_direct_sum(fixtures, name):
    c = fixtures(name)
    assert sp.simplify(to_sympy_s(topological_zeta(c)) - direct_topological(c)) == 0


def test_topological_needs_chi(fixtures):
    c = build_complex(HYPERSURFACE, 2, [vertex("a")], [dict(id="a", vertices=("a",))])
    with pytest.raises(ZetaInputError, match="cell a"):
        topological_zeta(c)
    with pytest.raises(ZetaInputError):
        topological_zeta(point())


def test_empty_over_x_data_gives_zero():
    c = build_complex(
        HYPERSURFACE, 2, [vertex("a")], [dict(id="a", vertices=("a",), chi_over_x=0, class_over_x=LaurentPoly({}, "L"))]
    )
    assert render_topological(topological_zeta(c)) == "0"
    assert render_naive(naive_zeta_specialized(c)) == "0"


def test_expression_respects_ambient_dimension():
    with pytest.raises(ZetaInputError):
        ZetaExpression("topological", (ZetaTerm("c", F(1), ((1, 1), (1, 2), (1, 3))),), 2)


def test_term_local_evaluation():
    """Dropping one term changes the sum by exactly that term."""
    terms = (ZetaTerm("a", F(2), ((1, 1),)), ZetaTerm("b", F(-1), ((1, 2), (3, 4))))
    both = evaluate_topological(ZetaExpression("topological", terms, 2))
    first = evaluate_topological(ZetaExpression("topological", terms[:1], 2))
    second = evaluate_topological(ZetaExpression("topological", terms[1:], 2))
    assert sp.simplify(to_sympy_s(both) - to_sympy_s(first) - to_sympy_s(second)) == 0


# -- naive, specialized -----------------------------------------------------


def test_smooth_naive(fixtures):
    z = naive_zeta_specialized(fixtures("smooth"))
    assert z.D == 2
    expected = (w**4 - 1) * w**-4 * T / (1 - w**-4 * T)
    assert sp.simplify(to_sympy_T(z.canonical) - expected) == 0
    assert render_naive(z) == "(1 - w^(-4))*T/(1 - w^(-4)*T) ; (-w^4 + 1)*T/(T - w^4)"


def test_monomial_naive_before_rescaling(fixtures):
    z = naive_zeta_specialized(fixtures("monomial"))
    assert z.D == 12
    before = (u**2 - 1) ** 2 * u ** (-2 - 2) * T ** (2 + 3) / ((1 - u**-2 * T**2) * (1 - u**-2 * T**3))
    assert sp.simplify(to_sympy_T(z.function) - before.subs(u, w**12)) == 0


@pytest.mark.parametrize("name", HYPER)
def test_naive_matches_direct_substitution(fixtures, name):
    c = fixtures(name)
    z = naive_zeta_specialized(c)
    assert z.D == 2 * lcm(*[v.N for v in c.vertices]) == rescale_factor(c)
    direct = direct_naive(c).subs(u, w**z.D)
    assert sp.cancel(sp.together(to_sympy_T(z.canonical) - direct)) == 0


@pytest.mark.parametrize("name", ["smooth", "cusp", "nodal-line", "f3", "f4"])
def test_naive_orders_match_sympy_oracle(fixtures, name):
    c = fixtures(name)
    z = naive_zeta_specialized(c)
    direct = direct_naive(c)
    for s0 in candidate_poles(c):
        assert z.order_at(s0) == oracle_order(direct, s0), s0


@pytest.mark.parametrize("name", ["cusp", "nodal-line", "f3", "f5"])
def test_specialization_coherence(fixtures, name):
    """Z_top(s) is the L -> 1 limit of the naive zeta term by term."""
    c = fixtures(name)
    z = topological_zeta(c)
    for s1 in (sp.Integer(1), sp.Rational(1, 3)):
        total = 0
        for cell in c.cells:
            if not c.is_over_x(cell):
                continue
            term = cell_poincare_sym(cell).subs(u, 1)
            for v in cell.vertices:
                d = c.vertex_map[v]
                L = sp.exp(h)
                x = L ** (-d.nu) * L ** (-s1 * d.N)
                term *= sp.limit((L - 1) * x / (1 - x), h, 0)
            total += term
        assert total == sp.Rational(z(F(s1.p, s1.q)).numerator, z(F(s1.p, s1.q)).denominator)


# -- poles ------------------------------------------------------------------


def test_candidate_poles(fixtures):
    assert candidate_poles(fixtures("cusp")) == [-1, F(-5, 6)]
    assert candidate_poles(fixtures("smooth")) == [-1]
    for N in (4, 5):
        assert candidate_poles(fixtures(f"f{N}")) == sorted([F(-1), F(-3, N), F(-5, N + 2)])


def orders(reports):
    return {r.candidate: r.order for r in reports}


def test_pole_spectrum_simple():
    rf = RationalFunction(Poly((1,), "s"), Poly((1, 1), "s"))
    reports = pole_spectrum(rf, [-1, F(-1, 2)])
    assert orders(reports) == {-1: 1, F(-1, 2): 0}
    assert [r.is_largest for r in reports] == [True, False]


def test_cusp_poles(fixtures):
    c = fixtures("cusp")
    for z in (topological_zeta(c), naive_zeta_specialized(c)):
        reports = pole_spectrum(z, candidate_poles(c))
        assert orders(reports) == {-1: 1, F(-5, 6): 1}
        assert [r.candidate for r in reports if r.is_largest] == [F(-5, 6)]


def test_f3_order_three(fixtures):
    c = fixtures("f3")
    expr = topological_expression(c)
    for z in (topological_zeta(c), naive_zeta_specialized(c)):
        reports = pole_spectrum(z, candidate_poles(c), expr if isinstance(z, RationalFunction) else None, bound=3)
        assert orders(reports) == {-1: 3}
        assert reports[0].is_largest
        assert set(reports[0].witnesses) >= {"T1", "T2"}
    assert leading_coefficient_at(topological_zeta(c), -1, 3) == F(2, 15)


def test_x2y2_double_pole(fixtures):
    c = fixtures("x2y2")
    assert orders(pole_spectrum(topological_zeta(c), candidate_poles(c))) == {F(-1, 2): 2}
    assert naive_zeta_specialized(c).order_at(F(-1, 2)) == 2


def test_bound_violation_is_an_internal_error():
    rf = RationalFunction(Poly((1,), "s"), Poly((1, 1), "s") ** 3)
    with pytest.raises(RuntimeError):
        pole_spectrum(rf, [-1], bound=2)


def test_non_integral_point_is_a_rescaling_bug(fixtures):
    z = naive_zeta_specialized(fixtures("smooth"))
    with pytest.raises(RuntimeError, match="rescaling bug"):
        z.point(F(-1, 7))
