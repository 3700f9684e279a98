"""Dual regular cell complex of an SNC divisor, decorated with (N, nu) data.

Vertices are prime components; cells are strata (connected components of
intersections), so several cells may share one vertex set.  The face
relation is explicit because that splitting cannot be inferred from vertex
sets alone.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping

from .algebra import LaurentPoly

HYPERSURFACE = "hypersurface"
DEGENERATION = "degeneration"
MODES = (HYPERSURFACE, DEGENERATION)


class InvalidComplexError(ValueError):
    """Raised when an operation needs data the complex does not provide."""

    def __init__(self, message: str, violations: list[str] | None = None):
        super().__init__(message)
        self.violations = violations or []


@dataclass(frozen=True)
class Divisor:
    id: str
    N: int
    nu: int
    label: str = ""
    exceptional: bool = False
    meets_x: bool = True
    class_poly: LaurentPoly | None = None

    @property
    def weight(self) -> Fraction:
        return Fraction(self.nu, self.N)


@dataclass(frozen=True)
class Stratum:
    """A cell.  ``over_x=None`` means "derive from the vertices' meets_x"."""

    id: str
    vertices: tuple[str, ...]
    faces: tuple[str, ...] = ()
    chi_over_x: int | None = None
    over_x: bool | None = None
    class_over_x: LaurentPoly | None = None
    poincare_over_x: LaurentPoly | None = None

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(sorted(self.vertices)))
        object.__setattr__(self, "faces", tuple(self.faces))

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1


@dataclass(frozen=True)
class StrataComplex:
    mode: str
    ambient_dimension: int
    vertices: tuple[Divisor, ...] = ()
    cells: tuple[Stratum, ...] = ()
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "cells", tuple(self.cells))

    # -- lookups ----------------------------------------------------------
    @cached_property
    def vertex_map(self) -> dict[str, Divisor]:
        return {v.id: v for v in self.vertices}

    @cached_property
    def cell_map(self) -> dict[str, Stratum]:
        return {c.id: c for c in self.cells}

    @property
    def face_relation(self) -> dict[str, tuple[str, ...]]:
        return {c.id: c.faces for c in self.cells}

    @cached_property
    def cofaces(self) -> dict[str, tuple[str, ...]]:
        """Cell id -> ids of the cells having it as a codimension-1 face."""
        up: dict[str, list[str]] = {c.id: [] for c in self.cells}
        for c in self.cells:
            for f in c.faces:
                if f in up:
                    up[f].append(c.id)
        return {k: tuple(v) for k, v in up.items()}

    @cached_property
    def proper_faces(self) -> dict[str, frozenset[str]]:
        """Cell id -> all proper faces of any codimension."""
        out: dict[str, frozenset[str]] = {}

        def closure(cid: str, seen: tuple = ()) -> frozenset[str]:
            if cid in out:
                return out[cid]
            if cid in seen:
                raise InvalidComplexError(f"cyclic face relation at {cid}")
            acc: set[str] = set()
            for f in self.cell_map[cid].faces:
                if f in self.cell_map:
                    acc.add(f)
                    acc |= closure(f, seen + (cid,))
            out[cid] = frozenset(acc)
            return out[cid]

        for c in self.cells:
            closure(c.id)
        return out

    def meets_x(self, vertex_id: str) -> bool:
        if self.mode == DEGENERATION:
            return True
        return self.vertex_map[vertex_id].meets_x

    def is_over_x(self, cell: Stratum | str) -> bool:
        """Membership in Sk(Y, x): the stratum meets the fiber over x."""
        if isinstance(cell, str):
            cell = self.cell_map[cell]
        if self.mode == DEGENERATION:
            return True
        if cell.over_x is not None:
            return cell.over_x
        return all(self.meets_x(v) for v in cell.vertices)

    def weight(self, vertex_id: str) -> Fraction:
        return self.vertex_map[vertex_id].weight

    def cell_weights(self, cell: Stratum | str) -> list[Fraction]:
        if isinstance(cell, str):
            cell = self.cell_map[cell]
        return [self.weight(v) for v in cell.vertices]

    def max_weight(self, cell: Stratum | str) -> Fraction:
        return max(self.cell_weights(cell))

    def cell_ids(self) -> frozenset[str]:
        return frozenset(c.id for c in self.cells)

    def restrict(self, keep_cells: Iterable[str], name: str = "") -> "StrataComplex":
        """Subcomplex on the given cells (assumed closed under faces)."""
        keep = set(keep_cells)
        cells = tuple(c for c in self.cells if c.id in keep)
        used = {v for c in cells for v in c.vertices}
        vertices = tuple(v for v in self.vertices if v.id in used)
        return StrataComplex(self.mode, self.ambient_dimension, vertices, cells, name=name or self.name)

    def __len__(self):
        return len(self.cells)


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------


def validate(c: StrataComplex) -> list[str]:
    """All invariant violations, one message per offending id and rule."""
    out: list[str] = []
    if c.mode not in MODES:
        out.append(f"complex: unknown mode {c.mode!r}")
    if not isinstance(c.ambient_dimension, int) or c.ambient_dimension < 1:
        out.append("complex: ambient_dimension must be a positive integer")

    seen: set[str] = set()
    for v in c.vertices:
        if v.id in seen:
            out.append(f"vertex {v.id}: duplicate id")
        seen.add(v.id)
        if not isinstance(v.N, int) or v.N < 1:
            out.append(f"vertex {v.id}: N must be a positive integer")
        if not isinstance(v.nu, int) or v.nu < 1:
            out.append(f"vertex {v.id}: nu must be a positive integer")
    if c.mode == HYPERSURFACE and c.vertices and not any(v.meets_x for v in c.vertices):
        out.append("complex: no vertex meets x")

    cell_ids: set[str] = set()
    for cell in c.cells:
        if cell.id in cell_ids:
            out.append(f"cell {cell.id}: duplicate id")
        cell_ids.add(cell.id)

    zero_cells: dict[str, list[str]] = {}
    for cell in c.cells:
        if not cell.vertices:
            out.append(f"cell {cell.id}: empty vertex set")
            continue
        if len(set(cell.vertices)) != len(cell.vertices):
            out.append(f"cell {cell.id}: repeated vertex")
        unknown = [v for v in cell.vertices if v not in c.vertex_map]
        for v in unknown:
            out.append(f"cell {cell.id}: unknown vertex {v}")
        if isinstance(c.ambient_dimension, int) and cell.dim > c.ambient_dimension - 1:
            out.append(f"cell {cell.id}: dimension {cell.dim} exceeds ambient dimension - 1")
        if cell.dim == 0:
            zero_cells.setdefault(cell.vertices[0], []).append(cell.id)
        vset = set(cell.vertices)
        covered: set[str] = set()
        for f in cell.faces:
            face = c.cell_map.get(f)
            if face is None:
                out.append(f"cell {cell.id}: unknown face {f}")
                continue
            fset = set(face.vertices)
            if not (fset < vset and len(fset) == len(vset) - 1):
                out.append(f"cell {cell.id}: face {f} is not a codimension-1 face")
                continue
            covered |= vset - fset
            if c.mode == HYPERSURFACE and c.is_over_x(cell) and not c.is_over_x(face):
                out.append(f"cell {cell.id}: over x but its face {f} is not")
        if len(vset) > 1 and not unknown:
            for v in sorted(vset - covered):
                rest = ",".join(sorted(vset - {v}))
                out.append(f"cell {cell.id}: missing face on {{{rest}}}")
        if cell.dim == 0 and cell.faces:
            out.append(f"cell {cell.id}: a 0-cell has no faces")
        if cell.chi_over_x is not None and not isinstance(cell.chi_over_x, int):
            out.append(f"cell {cell.id}: chi_over_x must be an integer")
    for v in c.vertices:
        n = len(zero_cells.get(v.id, []))
        if n != 1:
            out.append(f"vertex {v.id}: expected exactly one 0-cell, found {n}")
    try:
        c.proper_faces
    except InvalidComplexError as exc:
        out.append(str(exc))
    return out


def check_valid(c: StrataComplex) -> StrataComplex:
    problems = validate(c)
    if problems:
        raise InvalidComplexError("invalid strata complex: " + "; ".join(problems), problems)
    return c


def weights(c: StrataComplex) -> dict[str, Fraction]:
    """Vertex id -> nu/N, exactly."""
    return {v.id: v.weight for v in c.vertices}


def lct(c: StrataComplex) -> Fraction:
    """Log canonical threshold: min nu/N over vertices meeting x."""
    if c.mode != HYPERSURFACE:
        raise InvalidComplexError("lct is defined in hypersurface mode; use min_weight")
    ws = [v.weight for v in c.vertices if v.meets_x]
    if not ws:
        raise InvalidComplexError("no component over x")
    return min(ws)


def min_weight(c: StrataComplex) -> Fraction:
    if not c.vertices:
        raise InvalidComplexError("min_weight of an empty complex")
    return min(v.weight for v in c.vertices)


def minimal_value(c: StrataComplex) -> Fraction:
    """lct in hypersurface mode, min_weight in degeneration mode."""
    return lct(c) if c.mode == HYPERSURFACE else min_weight(c)


def spanned_subcomplex(c: StrataComplex, keep: Iterable[str], name: str = "") -> StrataComplex:
    """Cells whose vertex set lies inside ``keep``."""
    keep = set(keep)
    unknown = keep - set(c.vertex_map)
    if unknown:
        raise InvalidComplexError(f"unknown vertices: {sorted(unknown)}")
    cells = [cell.id for cell in c.cells if set(cell.vertices) <= keep]
    out = c.restrict(cells, name)
    # vertices without any surviving cell cannot occur for valid input
    vertices = tuple(v for v in c.vertices if v.id in keep)
    return StrataComplex(c.mode, c.ambient_dimension, vertices, out.cells, name=out.name)


def over_x_subcomplex(c: StrataComplex) -> StrataComplex:
    """Sk(Y, x): the cells whose strata meet the fiber over x."""
    return c.restrict([cell.id for cell in c.cells if c.is_over_x(cell)], name=c.name)


def level_subcomplex(c: StrataComplex, w, over_x: bool = False) -> StrataComplex:
    w = Fraction(w)
    sub = spanned_subcomplex(c, [v.id for v in c.vertices if v.weight <= w])
    if over_x:
        sub = over_x_subcomplex(sub)
    return sub


def essential_skeleton(c: StrataComplex) -> StrataComplex:
    """Subcomplex spanned by the vertices of minimal weight.

    In hypersurface mode only vertices meeting x count and the result is
    cut down to Sk(Y, x).
    """
    if not c.vertices:
        return c
    if c.mode == DEGENERATION:
        w0 = min_weight(c)
        return spanned_subcomplex(c, [v.id for v in c.vertices if v.weight == w0])
    w0 = lct(c)
    keep = [v.id for v in c.vertices if v.meets_x and v.weight == w0]
    return over_x_subcomplex(spanned_subcomplex(c, keep))


def exceptional_subcomplex(c: StrataComplex, over_x: bool = False) -> StrataComplex:
    if c.mode != HYPERSURFACE:
        raise InvalidComplexError("exceptional subcomplex is defined in hypersurface mode")
    sub = spanned_subcomplex(c, [v.id for v in c.vertices if v.exceptional])
    return over_x_subcomplex(sub) if over_x else sub


def euler_characteristic(c: StrataComplex) -> int:
    return sum((-1) ** cell.dim for cell in c.cells)


def maximal_cells(c: StrataComplex) -> list[Stratum]:
    """Cells that are not a proper face of another cell of ``c``."""
    ids = c.cell_ids()
    return [cell for cell in c.cells if not any(k in ids for k in c.cofaces[cell.id])]


def is_subcomplex(sub: StrataComplex, c: StrataComplex) -> bool:
    for cell in sub.cells:
        other = c.cell_map.get(cell.id)
        if other is None or other.vertices != cell.vertices:
            return False
    return True


def disjoint_union(a: StrataComplex, b: StrataComplex, prefix: tuple[str, str] = ("a:", "b:")) -> StrataComplex:
    """Disjoint union with ids prefixed to keep them apart."""

    def tag(cx: StrataComplex, p: str):
        vs = [replace(v, id=p + v.id) for v in cx.vertices]
        cs = [
            replace(cell, id=p + cell.id, vertices=tuple(p + v for v in cell.vertices), faces=tuple(p + f for f in cell.faces))
            for cell in cx.cells
        ]
        return vs, cs

    va, ca = tag(a, prefix[0])
    vb, cb = tag(b, prefix[1])
    return StrataComplex(a.mode, max(a.ambient_dimension, b.ambient_dimension), va + vb, ca + cb)


def build_complex(
    mode: str,
    ambient_dimension: int,
    vertices: Iterable[Divisor],
    cells: Iterable[Mapping | Stratum],
    name: str = "",
) -> StrataComplex:
    """Convenience constructor; cell mappings may omit ``faces``, which are
    then inferred when the vertex-set lookup is unambiguous."""
    vs = tuple(vertices)
    raw = [c if isinstance(c, Stratum) else Stratum(**c) for c in cells]
    by_set: dict[tuple[str, ...], list[str]] = {}
    for cell in raw:
        by_set.setdefault(cell.vertices, []).append(cell.id)
    out = []
    for cell in raw:
        if cell.faces or cell.dim == 0:
            out.append(cell)
            continue
        faces = []
        for v in cell.vertices:
            sub = tuple(x for x in cell.vertices if x != v)
            hits = by_set.get(sub, [])
            if len(hits) != 1:
                raise InvalidComplexError(f"cell {cell.id}: cannot infer face on {sub} ({len(hits)} candidates)")
            faces.append(hits[0])
        out.append(replace(cell, faces=tuple(faces)))
    return StrataComplex(mode, ambient_dimension, vs, tuple(out), name=name)
