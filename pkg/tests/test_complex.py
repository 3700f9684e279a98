from __future__ import annotations

from fractions import Fraction as F

import pytest
from shapes import circle, edge, point, triangle, vertex

from zetask.complex import (
    DEGENERATION,
    HYPERSURFACE,
    InvalidComplexError,
    Stratum,
    StrataComplex,
    build_complex,
    check_valid,
    essential_skeleton,
    euler_characteristic,
    exceptional_subcomplex,
    is_subcomplex,
    lct,
    level_subcomplex,
    maximal_cells,
    min_weight,
    spanned_subcomplex,
    validate,
    weights,
)


def test_validate_accepts_a_point():
    assert validate(point()) == []


def test_validate_unknown_vertex():
    c = point()
    bad = StrataComplex(c.mode, 2, c.vertices, c.cells + (Stratum("c3", ("v1", "e9"), faces=("v1",)),))
    assert validate(bad) == ["cell c3: unknown vertex e9"]


def test_validate_missing_face_is_one_violation():
    t = triangle()
    cells = tuple(
        Stratum(x.id, x.vertices, faces=tuple(f for f in x.faces if f != "bc")) if x.id == "t" else x for x in t.cells
    )
    problems = validate(StrataComplex(t.mode, t.ambient_dimension, t.vertices, cells))
    assert problems == ["cell t: missing face on {b,c}"]


def test_validate_reports_every_problem():
    c = StrataComplex(
        "nonsense",
        0,
        (vertex("a", 0, 1), vertex("a")),
        (Stratum("a", ("a",)),),
    )
    problems = validate(c)
    assert "complex: unknown mode 'nonsense'" in problems
    assert "vertex a: duplicate id" in problems
    assert "vertex a: N must be a positive integer" in problems
    with pytest.raises(InvalidComplexError) as err:
        check_valid(c)
    assert err.value.violations == problems


def test_validate_dimension_bound():
    t = triangle()
    low = StrataComplex(t.mode, 2, t.vertices, t.cells)
    assert validate(low) == ["cell t: dimension 2 exceeds ambient dimension - 1"]


def test_faces_that_form_a_cycle_are_rejected():
    vs = [vertex("a"), vertex("b")]
    cells = (
        Stratum("a", ("a",)),
        Stratum("b", ("b",)),
        Stratum("e", ("a", "b"), faces=("a", "b")),
    )
    good = StrataComplex(DEGENERATION, 2, tuple(vs), cells)
    assert validate(good) == []
    bad = StrataComplex(DEGENERATION, 2, tuple(vs), cells[:2] + (Stratum("e", ("a", "b"), faces=("a", "e")),))
    assert validate(bad)


def test_weights(fixtures):
    assert weights(point()) == {"v1": 1}
    assert weights(fixtures("cusp"))["E3"] == F(5, 6)
    for N in (3, 4, 5):
        assert weights(fixtures(f"f{N}")) == {"D2": 1, "E1": F(3, N), "E2": F(5, N + 2)}


def test_lct(fixtures):
    assert lct(fixtures("cusp")) == F(5, 6)
    assert lct(fixtures("f3")) == 1
    assert lct(fixtures("f4")) == F(3, 4)
    assert lct(fixtures("f5")) == F(3, 5)
    with pytest.raises(InvalidComplexError):
        lct(point())


def test_lct_needs_a_component_over_x():
    c = build_complex(
        HYPERSURFACE, 2, [vertex("a", meets_x=False)], [dict(id="a", vertices=("a",), chi_over_x=1)]
    )
    with pytest.raises(InvalidComplexError, match="no component over x"):
        lct(c)


@pytest.mark.parametrize(
    "data, expected",
    [([(1, 1)], 1), ([(1, 2), (2, 3), (1, 1)], 1), ([(2, 1), (3, 1)], F(1, 3))],
)
def test_min_weight(data, expected):
    vs = [vertex(f"v{i}", N, nu) for i, (N, nu) in enumerate(data)]
    cells = [dict(id=v.id, vertices=(v.id,)) for v in vs]
    assert min_weight(build_complex(DEGENERATION, 2, vs, cells)) == expected


def test_min_weight_empty():
    with pytest.raises(InvalidComplexError):
        min_weight(StrataComplex(DEGENERATION, 2, (), ()))


def test_spanned_subcomplex(fixtures):
    t = triangle()
    assert spanned_subcomplex(t, "abc").cell_ids() == t.cell_ids()
    assert len(spanned_subcomplex(t, [])) == 0
    assert spanned_subcomplex(t, "ab").cell_ids() == {"a", "b", "ab"}
    assert spanned_subcomplex(fixtures("f4"), ["E1"]).cell_ids() == {"E1"}
    with pytest.raises(InvalidComplexError):
        spanned_subcomplex(t, ["zz"])


def test_level_subcomplex(fixtures):
    cusp = fixtures("cusp")
    assert level_subcomplex(cusp, 1).cell_ids() == cusp.cell_ids()
    assert len(level_subcomplex(cusp, F(1, 2))) == 0
    assert level_subcomplex(cusp, F(5, 6)).cell_ids() == {"E3"}


def test_essential_skeleton(fixtures):
    f3 = fixtures("f3")
    assert essential_skeleton(f3).cell_ids() == f3.cell_ids()
    for N in (4, 5):
        assert essential_skeleton(fixtures(f"f{N}")).cell_ids() == {"E1"}
    assert essential_skeleton(point()).cell_ids() == {"v1"}
    assert essential_skeleton(fixtures("cusp")).cell_ids() == {"E3"}


def test_essential_skeleton_degeneration(fixtures):
    assert essential_skeleton(fixtures("degeneration")).cell_ids() == {"b", "c", "b.c"}


def test_exceptional_subcomplex(fixtures):
    cusp = fixtures("cusp")
    exc = exceptional_subcomplex(cusp)
    assert exc.cell_ids() == {"E1", "E2", "E3", "E1.E3", "E2.E3"}
    assert is_subcomplex(exc, cusp)
    assert len(exceptional_subcomplex(fixtures("smooth"))) == 0
    with pytest.raises(InvalidComplexError):
        exceptional_subcomplex(point())


def test_exceptional_subcomplex_all_exceptional():
    vs = [vertex("a", 2, 2, exceptional=True), vertex("b", 3, 3, exceptional=True)]
    cells = [dict(id="a", vertices=("a",), chi_over_x=1), dict(id="b", vertices=("b",), chi_over_x=1)]
    cells.append(dict(id="ab", vertices=("a", "b"), chi_over_x=1))
    c = build_complex(HYPERSURFACE, 2, vs, cells)
    assert exceptional_subcomplex(c).cell_ids() == c.cell_ids()


def test_euler_characteristic(fixtures):
    for N in (3, 4, 5):
        assert euler_characteristic(fixtures(f"f{N}")) == 2
    assert euler_characteristic(point()) == 1
    assert euler_characteristic(circle()) == 0
    assert euler_characteristic(triangle()) == 1
    assert euler_characteristic(edge()) == 1


def test_f_n_is_a_two_sphere(fixtures):
    for N in (3, 4, 5):
        c = fixtures(f"f{N}")
        edges = [x.id for x in c.cells if x.dim == 1]
        for e in edges:
            assert sum(e in x.faces for x in c.cells if x.dim == 2) == 2


def test_maximal_cells():
    assert [x.id for x in maximal_cells(triangle())] == ["t"]
    assert sorted(x.id for x in maximal_cells(circle())) == ["e1", "e2"]


def test_build_complex_refuses_ambiguous_faces():
    vs = [vertex("a"), vertex("b"), vertex("c")]
    cells = [dict(id=v, vertices=(v,)) for v in "abc"]
    cells += [dict(id="ab1", vertices=("a", "b")), dict(id="ab2", vertices=("a", "b"))]
    cells += [dict(id="ac", vertices=("a", "c")), dict(id="bc", vertices=("b", "c"))]
    cells.append(dict(id="t", vertices=("a", "b", "c")))
    with pytest.raises(InvalidComplexError, match="cannot infer face"):
        build_complex(DEGENERATION, 3, vs, cells)
