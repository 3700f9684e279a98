"""Embedded resolution of a plane curve germ at the origin by point blowups.

The input polynomial is factored over QQ; every irreducible factor through
the origin becomes a strict-transform component with ``N`` equal to its
exponent.  Infinitely near points are followed chart by chart until the
total transform has simple normal crossings over the origin.  Only
rational infinitely near points are supported.

Polynomial grammar (whitespace ignored)::

    expr   := term (("+" | "-") term)*
    term   := factor (("*" | "/" | <juxtaposition>) factor)*
    factor := ("+" | "-") factor | atom (("^" | "**") exponent)?
    atom   := integer | "x" | "y" | "(" expr ")"

Division is by nonzero constants only; exponents are nonnegative integers.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Mapping

import sympy

from .algebra import LaurentPoly, frac_str
from .complex import HYPERSURFACE, Divisor, StrataComplex, Stratum

DEFAULT_MAX_BLOWUPS = 200


class ResolutionError(ValueError):
    pass


class PolySyntaxError(ValueError):
    pass


# ---------------------------------------------------------------------------
# polynomials in x, y
# ---------------------------------------------------------------------------


class PlanePoly:
    """Polynomial in ``x, y`` over QQ; ``terms`` maps ``(i, j)`` to the
    coefficient of ``x^i y^j``."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[tuple[int, int], object] | None = None):
        clean = {}
        for (i, j), c in (terms or {}).items():
            if i < 0 or j < 0:
                raise ValueError("negative exponent in a polynomial")
            c = Fraction(c)
            if c:
                clean[(int(i), int(j))] = c
        self._terms = clean

    @classmethod
    def parse(cls, text: str) -> "PlanePoly":
        return _Parser(text).parse()

    @classmethod
    def x(cls) -> "PlanePoly":
        return cls({(1, 0): 1})

    @classmethod
    def y(cls) -> "PlanePoly":
        return cls({(0, 1): 1})

    @classmethod
    def constant(cls, c) -> "PlanePoly":
        return cls({(0, 0): c})

    @property
    def terms(self) -> dict[tuple[int, int], Fraction]:
        return dict(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_constant(self) -> bool:
        return all(k == (0, 0) for k in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("not a constant")
        return self._terms.get((0, 0), Fraction(0))

    def __eq__(self, other):
        if isinstance(other, PlanePoly):
            return self._terms == other._terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __add__(self, other: "PlanePoly") -> "PlanePoly":
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, 0) + c
        return PlanePoly(out)

    def __neg__(self):
        return PlanePoly({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: "PlanePoly") -> "PlanePoly":
        out: dict = {}
        for (i1, j1), c1 in self._terms.items():
            for (i2, j2), c2 in other._terms.items():
                k = (i1 + i2, j1 + j2)
                out[k] = out.get(k, 0) + c1 * c2
        return PlanePoly(out)

    def __pow__(self, n: int) -> "PlanePoly":
        acc = PlanePoly.constant(1)
        for _ in range(n):
            acc = acc * self
        return acc

    def __call__(self, x, y):
        return sum((c * Fraction(x) ** i * Fraction(y) ** j for (i, j), c in self._terms.items()), Fraction(0))

    def multiplicity(self, point=(0, 0)) -> int:
        """Order of vanishing at a rational point (0 when it does not vanish)."""
        p = self.translate(*point) if tuple(point) != (0, 0) else self
        if not p:
            raise ValueError("multiplicity of the zero polynomial")
        return min(i + j for i, j in p._terms)

    def initial_form(self) -> "PlanePoly":
        m = self.multiplicity()
        return PlanePoly({k: c for k, c in self._terms.items() if sum(k) == m})

    def translate(self, a, b) -> "PlanePoly":
        """``f(x + a, y + b)``."""
        a, b = Fraction(a), Fraction(b)
        out: dict = {}
        for (i, j), c in self._terms.items():
            for p in range(i + 1):
                cx = comb(i, p) * a ** (i - p)
                if not cx:
                    continue
                for q in range(j + 1):
                    cy = comb(j, q) * b ** (j - q)
                    if cy:
                        out[(p, q)] = out.get((p, q), 0) + c * cx * cy
        return PlanePoly(out)

    def chart1(self, m: int | None = None) -> "PlanePoly":
        """Strict transform in the chart ``(x, x*y)``: ``f(x, x y) / x^m``."""
        m = self.multiplicity() if m is None else m
        return PlanePoly({(i + j - m, j): c for (i, j), c in self._terms.items()})

    def chart2(self, m: int | None = None) -> "PlanePoly":
        """Strict transform in the chart ``(x*y, y)``: ``f(x y, y) / y^m``."""
        m = self.multiplicity() if m is None else m
        return PlanePoly({(i, i + j - m): c for (i, j), c in self._terms.items()})

    def restrict_x0(self) -> dict[int, Fraction]:
        """Coefficients of ``f(0, y)`` by power of ``y``."""
        return {j: c for (i, j), c in self._terms.items() if i == 0}

    def linear_part(self) -> tuple[Fraction, Fraction]:
        return self._terms.get((1, 0), Fraction(0)), self._terms.get((0, 1), Fraction(0))

    def to_sympy(self, x=None, y=None):
        x = x if x is not None else sympy.Symbol("x")
        y = y if y is not None else sympy.Symbol("y")
        return sympy.Add(
            *[sympy.Rational(c.numerator, c.denominator) * x**i * y**j for (i, j), c in self._terms.items()]
        )

    @classmethod
    def from_sympy(cls, expr, x=None, y=None) -> "PlanePoly":
        x = x if x is not None else sympy.Symbol("x")
        y = y if y is not None else sympy.Symbol("y")
        poly = sympy.Poly(expr, x, y, domain="QQ")
        return cls({k: Fraction(int(c.p), int(c.q)) for k, c in poly.terms()})

    def factor(self) -> tuple[Fraction, list[tuple["PlanePoly", int]]]:
        """Irreducible factorization over QQ: ``(content, [(factor, exponent)])``."""
        if not self:
            raise ValueError("cannot factor the zero polynomial")
        x, y = sympy.symbols("x y")
        content, parts = sympy.factor_list(self.to_sympy(x, y), x, y)
        out = [(PlanePoly.from_sympy(g, x, y), int(k)) for g, k in parts]
        return Fraction(int(sympy.Rational(content).p), int(sympy.Rational(content).q)), out

    def render(self) -> str:
        if not self._terms:
            return "0"
        pieces = []
        for (i, j), c in sorted(self._terms.items(), key=lambda kc: (sum(kc[0]), -kc[0][0])):
            mono = "*".join(
                ([f"x^{i}" if i > 1 else "x"] if i else []) + ([f"y^{j}" if j > 1 else "y"] if j else [])
            )
            pieces.append((c, mono))
        out = ""
        for n, (c, mono) in enumerate(pieces):
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if not mono:
                body = frac_str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{frac_str(a)}*{mono}"
            if n == 0:
                out = f"-{body}" if sign == "-" else body
            else:
                out += f" {sign} {body}"
        return out

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"PlanePoly({self.render()!r})"


_TOKEN = re.compile(r"\s*(?:(\d+)|(\*\*)|([xy])|([-+*/^()]))")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            m = _TOKEN.match(text, pos)
            if not m:
                bad = text[pos:].lstrip()[:1]
                raise PolySyntaxError(f"unexpected character {bad!r} at position {pos}")
            if m.group(1):
                self.tokens.append(("num", m.group(1), m.start(1)))
            elif m.group(2):
                self.tokens.append(("op", "^", m.start(2)))
            elif m.group(3):
                self.tokens.append(("var", m.group(3), m.start(3)))
            else:
                self.tokens.append(("op", m.group(4), m.start(4)))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else ("end", "", len(self.text))

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def parse(self) -> PlanePoly:
        if not self.tokens:
            raise PolySyntaxError("empty polynomial")
        p = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise PolySyntaxError(f"unexpected {val!r} at position {pos}")
        return p

    def expr(self) -> PlanePoly:
        p = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def _starts_atom(self, tok) -> bool:
        return tok[0] in ("num", "var") or tok[1] == "("

    def term(self) -> PlanePoly:
        p = self.factor()
        while True:
            tok = self.peek()
            if tok[0] == "op" and tok[1] == "*":
                self.take()
                p = p * self.factor()
            elif tok[0] == "op" and tok[1] == "/":
                self.take()
                _, _, pos = self.peek()
                q = self.factor()
                if not q.is_constant() or not q:
                    raise PolySyntaxError(f"division by a non-constant or zero at position {pos}")
                p = p * PlanePoly.constant(1 / q.constant_value())
            elif self._starts_atom(tok):
                p = p * self.factor()
            else:
                return p

    def factor(self) -> PlanePoly:
        tok = self.peek()
        if tok[0] == "op" and tok[1] in ("+", "-"):
            self.take()
            p = self.factor()
            return -p if tok[1] == "-" else p
        base = self.atom()
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "^":
            self.take()
            etok = self.peek()
            e = self.atom() if etok[1] != "-" else None
            if e is None or not e.is_constant():
                raise PolySyntaxError(f"exponent must be a nonnegative integer at position {etok[2]}")
            n = e.constant_value()
            if n.denominator != 1 or n < 0:
                raise PolySyntaxError(f"exponent must be a nonnegative integer at position {etok[2]}")
            return base ** int(n)
        return base

    def atom(self) -> PlanePoly:
        kind, val, pos = self.take()
        if kind == "num":
            return PlanePoly.constant(int(val))
        if kind == "var":
            return PlanePoly.x() if val == "x" else PlanePoly.y()
        if val == "(":
            p = self.expr()
            k2, v2, p2 = self.take()
            if v2 != ")":
                raise PolySyntaxError(f"expected ')' at position {p2}")
            return p
        if kind == "end":
            raise PolySyntaxError("unexpected end of input")
        raise PolySyntaxError(f"unexpected {val!r} at position {pos}")


# ---------------------------------------------------------------------------
# resolution
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DivisorData:
    id: str
    N: int
    nu: int


@dataclass(frozen=True)
class ResolutionNode:
    """A point of the total transform that is visited by the resolver.

    ``history`` lists the chart steps from the origin: ``(1, c)`` means
    ``(x, y) = (X, X (Y + c))`` and ``(2, 0)`` means ``(x, y) = (X Y, Y)``.
    ``dx`` / ``dy`` are the divisors ``{x = 0}`` / ``{y = 0}`` through the
    point in local coordinates.
    """

    id: str
    history: tuple[tuple[int, Fraction], ...]
    curves: tuple[tuple[str, PlanePoly], ...]
    dx: DivisorData | None = None
    dy: DivisorData | None = None
    blown_up: str | None = None  # id of the exceptional divisor created here

    def components(self) -> list[str]:
        ids = [cid for cid, _ in self.curves]
        ids += [d.id for d in (self.dx, self.dy) if d is not None]
        return ids


@dataclass
class ResolutionTree:
    polynomial: PlanePoly
    nodes: list[ResolutionNode] = field(default_factory=list)
    divisors: list[Divisor] = field(default_factory=list)
    intersections: list[tuple[str, str]] = field(default_factory=list)
    parents: dict[str, str | None] = field(default_factory=dict)

    def exceptional(self) -> list[Divisor]:
        return [d for d in self.divisors if d.exceptional]

    def to_json(self) -> dict:
        return {
            "polynomial": self.polynomial.render(),
            "blowups": [
                {
                    "point": n.id,
                    "parent": self.parents.get(n.id),
                    "chart_history": [[k, frac_str(c)] for k, c in n.history],
                    "divisor": n.blown_up,
                    "through": n.components(),
                }
                for n in self.nodes
                if n.blown_up
            ],
            "divisors": [
                {"id": d.id, "label": d.label, "N": d.N, "nu": d.nu, "exceptional": d.exceptional}
                for d in self.divisors
            ],
            "intersections": [list(p) for p in self.intersections],
        }


def _tangent(g: PlanePoly) -> tuple[Fraction, Fraction]:
    a, b = g.linear_part()
    # the line a x + b y = 0, normalized projectively
    if a:
        return Fraction(1), b / a
    return Fraction(0), Fraction(1)


def is_snc(node: ResolutionNode) -> bool:
    """At most two smooth components through the point, with distinct tangents."""
    tangents = []
    for _, g in node.curves:
        if g.multiplicity() != 1:
            return False
        tangents.append(_tangent(g))
    if node.dx is not None:
        tangents.append((Fraction(1), Fraction(0)))
    if node.dy is not None:
        tangents.append((Fraction(0), Fraction(1)))
    if len(tangents) > 2:
        return False
    return len(set(tangents)) == len(tangents)


def _rational_roots(coeffs: Mapping[int, Fraction]) -> list[Fraction]:
    """Distinct rational roots of ``sum c_j t^j``; raises on other factors."""
    if not coeffs:
        raise ResolutionError("internal: restriction to the exceptional divisor vanishes identically")
    t = sympy.Symbol("t")
    expr = sympy.Add(*[sympy.Rational(c.numerator, c.denominator) * t**j for j, c in coeffs.items()])
    if not expr.free_symbols:
        return []
    _, parts = sympy.factor_list(expr, t)
    roots = []
    for g, _ in parts:
        p = sympy.Poly(g, t)
        if p.degree() == 1:
            a, b = p.all_coeffs()
            r = -sympy.Rational(b) / sympy.Rational(a)
            roots.append(Fraction(int(r.p), int(r.q)))
        elif p.degree() > 1:
            mp = LaurentPoly({j: Fraction(int(c.p), int(c.q)) for (j,), c in p.monic().terms()}, "t")
            raise ResolutionError(f"requires algebraic point support: {mp.render()}")
    return sorted(set(roots))


class _Resolver:
    def __init__(self, f: PlanePoly, max_blowups: int):
        self.f = f
        self.max_blowups = max_blowups
        self.tree = ResolutionTree(f)
        self.exc: dict[str, DivisorData] = {}
        self.count = 0
        self.point_count = 0

    def new_point(self, history, curves, dx, dy, parent_mults=None) -> ResolutionNode:
        self.point_count += 1
        return ResolutionNode(f"p{self.point_count - 1}", tuple(history), tuple(curves), dx, dy)

    def visit(self, node: ResolutionNode, parent: str | None, mult_of: dict[str, int]):
        self.tree.parents[node.id] = parent
        for cid, g in node.curves:
            m = g.multiplicity()
            if parent is not None and m > mult_of[cid]:
                raise ResolutionError(f"internal: multiplicity of {cid} increased under blowup")
        if is_snc(node):
            self.tree.nodes.append(node)
            comps = node.components()
            if len(comps) == 2:
                self.tree.intersections.append(tuple(comps))
            return
        self.count += 1
        if self.count > self.max_blowups:
            raise ResolutionError(f"resolution step budget of {self.max_blowups} blowups exceeded")
        eid = f"E{self.count}"
        N = sum(self.k[cid] * g.multiplicity() for cid, g in node.curves)
        nu = 2
        for d in (node.dx, node.dy):
            if d is not None:
                N += d.N
                nu += d.nu - 1
        E = DivisorData(eid, N, nu)
        self.exc[eid] = E
        node = ResolutionNode(node.id, node.history, node.curves, node.dx, node.dy, eid)
        self.tree.nodes.append(node)
        self.tree.divisors.append(Divisor(eid, N, nu, label=eid, exceptional=True, meets_x=True))
        mults = {cid: g.multiplicity() for cid, g in node.curves}

        # chart 1: (x, x*y); E = {x = 0}
        c1 = [(cid, g.chart1()) for cid, g in node.curves]
        centers: set[Fraction] = set()
        for _, g in c1:
            centers.update(_rational_roots(g.restrict_x0()))
        if node.dy is not None:
            centers.add(Fraction(0))
        children = []
        for c in sorted(centers):
            curves = []
            for cid, g in c1:
                h = g.translate(0, c) if c else g
                if h(0, 0) == 0:
                    curves.append((cid, h))
            dy = node.dy if c == 0 else None
            children.append(self.new_point(node.history + ((1, c),), curves, E, dy))
        # chart 2 origin: (x*y, y); E = {y = 0}
        c2 = [(cid, g.chart2()) for cid, g in node.curves]
        curves = [(cid, g) for cid, g in c2 if g(0, 0) == 0]
        if curves or node.dx is not None:
            children.append(self.new_point(node.history + ((2, Fraction(0)),), curves, node.dx, E))
        for child in children:
            self.visit(child, node.id, mults)

    def run(self) -> ResolutionTree:
        f = self.f
        if not f or f.is_constant():
            raise ResolutionError("f must be a nonconstant polynomial")
        if f(0, 0) != 0:
            raise ResolutionError("f must vanish at the origin")
        _, parts = f.factor()
        through = sorted(((g, k) for g, k in parts if g(0, 0) == 0), key=lambda gk: (gk[0].render(), gk[1]))
        self.k = {}
        curves = []
        for n, (g, k) in enumerate(through, start=1):
            cid = f"C{n}"
            self.k[cid] = k
            curves.append((cid, g))
            self.tree.divisors.append(Divisor(cid, k, 1, label=g.render(), exceptional=False, meets_x=True))
        root = self.new_point((), curves, None, None)
        self.visit(root, None, {})
        return self.tree


def resolve(f: PlanePoly | str, max_blowups: int = DEFAULT_MAX_BLOWUPS) -> tuple[ResolutionTree, StrataComplex]:
    """Embedded resolution of ``f`` at the origin and its strata complex."""
    if isinstance(f, str):
        f = PlanePoly.parse(f)
    tree = _Resolver(f, max_blowups).run()
    return tree, tree_complex(tree)


def tree_complex(tree: ResolutionTree) -> StrataComplex:
    L = LaurentPoly.monomial(1, 1, "L")
    one = LaurentPoly.constant(1, "L")
    zero = LaurentPoly({}, "L")
    degree = {d.id: 0 for d in tree.divisors}
    for a, b in tree.intersections:
        degree[a] += 1
        degree[b] += 1
    blown = any(d.exceptional for d in tree.divisors)
    cells = []
    for d in tree.divisors:
        if d.exceptional:
            r = degree[d.id]
            cells.append(Stratum(d.id, (d.id,), (), 2 - r, True, L + 1 - r))
        elif not blown and len(tree.divisors) == 1:
            # smooth germ: the origin is a point of the open stratum
            cells.append(Stratum(d.id, (d.id,), (), 1, True, one))
        else:
            cells.append(Stratum(d.id, (d.id,), (), 0, True, zero))
    seen: dict[tuple[str, str], int] = {}
    for a, b in tree.intersections:
        key = tuple(sorted((a, b)))
        seen[key] = seen.get(key, 0) + 1
        cid = f"{key[0]}.{key[1]}" + (f"#{seen[key]}" if seen[key] > 1 else "")
        cells.append(Stratum(cid, key, key, 1, True, one))
    return StrataComplex(HYPERSURFACE, 2, tuple(tree.divisors), tuple(cells), name=tree.polynomial.render())
