"""Builders for the bundled example complexes.

Curve fixtures come from the resolver.  The threefold family ``f_N``
(``u^(N-2) v w + v^N + w^N + u^(N+2)``, resolved by two point blowups) and
the degeneration example are encoded by hand.
"""

from __future__ import annotations

from .algebra import LaurentPoly
from .complex import DEGENERATION, HYPERSURFACE, Divisor, StrataComplex, build_complex
from .curves import resolve

CURVES = {
    "smooth": "x",
    "monomial": "x^2*y^3",
    "cusp": "x^2 + y^3",
    "nodal-line": "(y^2 - x^2 - x^3)*(y - 2*x)",
    "x2y2": "x^2*y^2",
}


def curve_fixture(name: str) -> StrataComplex:
    _, c = resolve(CURVES[name])
    return StrataComplex(c.mode, c.ambient_dimension, c.vertices, c.cells, name=name)


def _L(terms: dict[int, int]) -> LaurentPoly:
    return LaurentPoly(terms, "L")


def _u(terms: dict[int, int]) -> LaurentPoly:
    return LaurentPoly(terms, "u")


def f_n_complex(N: int) -> StrataComplex:
    """Dual complex of ``Delta_2 + N E1' + (N+2) E2``: a 2-sphere made of two
    triangles glued along their boundary.

    ``Delta_2 cap E1'`` is the strict transform of a nodal plane curve of
    degree ``N``, of genus ``g = (N-1)(N-2)/2 - 1``, minus its two points on
    ``E2``.  Strata whose class is not a polynomial in ``L`` carry a
    Poincare polynomial instead.
    """
    if N < 3:
        raise ValueError("the family starts at N = 3")
    g = (N - 1) * (N - 2) // 2 - 1
    vertices = (
        Divisor("D2", 1, 1, label="Delta_2", exceptional=False, meets_x=True),
        Divisor("E1", N, 3, label="E1'", exceptional=True, meets_x=True),
        Divisor("E2", N + 2, 5, label="E2", exceptional=True, meets_x=True),
    )
    one, zero = _L({0: 1}), _L({})
    if g:
        curve = dict(poincare_over_x=_u({2: 1, 1: -2 * g, 0: -1}))
        e1 = dict(poincare_over_x=_u({4: 1, 1: 2 * g, 0: 1}))
    else:
        curve = dict(class_over_x=_L({1: 1, 0: -1}))
        e1 = dict(class_over_x=_L({2: 1, 0: 1}))
    cells = [
        dict(id="D2", vertices=("D2",), chi_over_x=0, class_over_x=zero),
        dict(id="E1", vertices=("E1",), chi_over_x=2 + 2 * g, **e1),
        dict(id="E2", vertices=("E2",), chi_over_x=1, class_over_x=_L({2: 1, 1: -1, 0: 1})),
        dict(id="D2.E1", vertices=("D2", "E1"), chi_over_x=-2 * g, **curve),
        dict(id="D2.E2", vertices=("D2", "E2"), chi_over_x=0, class_over_x=_L({1: 1, 0: -1})),
        dict(id="E1.E2", vertices=("E1", "E2"), chi_over_x=0, class_over_x=_L({1: 1, 0: -1})),
        dict(id="T1", vertices=("D2", "E1", "E2"), chi_over_x=1, class_over_x=one),
        dict(id="T2", vertices=("D2", "E1", "E2"), chi_over_x=1, class_over_x=one),
    ]
    faces = ("D2.E1", "D2.E2", "E1.E2")
    cells[-2]["faces"] = faces
    cells[-1]["faces"] = faces
    return build_complex(HYPERSURFACE, 3, vertices, cells, name=f"f{N}")


def degeneration_path() -> StrataComplex:
    """Three components in a chain with weights 2, 1, 1."""
    vertices = (
        Divisor("a", 1, 2, label="a"),
        Divisor("b", 1, 1, label="b"),
        Divisor("c", 1, 1, label="c"),
    )
    cells = [
        dict(id="a", vertices=("a",)),
        dict(id="b", vertices=("b",)),
        dict(id="c", vertices=("c",)),
        dict(id="a.b", vertices=("a", "b")),
        dict(id="b.c", vertices=("b", "c")),
    ]
    return build_complex(DEGENERATION, 2, vertices, cells, name="degeneration")


def build_fixture(name: str) -> StrataComplex:
    if name in CURVES:
        return curve_fixture(name)
    if name in ("f3", "f4", "f5"):
        return f_n_complex(int(name[1:]))
    if name == "degeneration":
        return degeneration_path()
    raise KeyError(name)
