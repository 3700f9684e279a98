"""Topological and Poincare-specialized naive zeta functions of a strata
complex, with exact pole analysis.

Specialization: a class in the Grothendieck ring goes to its Poincare
polynomial, ``L -> u^2``, and ``T = L^(-s)``.  The factor ``L^(-nu - N s)``
becomes ``u^(-2 nu) T^N``.  For pole analysis ``u = w^D`` with
``D = 2 lcm(N_j)`` so that ``T0 = L^(-s0) = w^(-2 D s0)`` has an integral
exponent for every candidate ``s0 = -nu/N``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import lcm

from .algebra import (
    ExponentRescaling,
    LaurentPoly,
    Poly,
    RationalFunction,
    frac_str,
    normalize,
    pole_order_at,
    root_multiplicity,
)
from .complex import HYPERSURFACE, InvalidComplexError, StrataComplex

TOPOLOGICAL = "topological"
NAIVE = "naive-specialized"


class ZetaInputError(InvalidComplexError):
    pass


@dataclass(frozen=True)
class ZetaTerm:
    cell_id: str
    coefficient: object  # Fraction (topological) or LaurentPoly in u (naive)
    factors: tuple[tuple[int, int], ...]  # sorted (nu, N) pairs


@dataclass(frozen=True)
class ZetaExpression:
    kind: str
    terms: tuple[ZetaTerm, ...]
    ambient_dimension: int

    def __post_init__(self):
        for t in self.terms:
            if len(t.factors) > self.ambient_dimension:
                raise ZetaInputError(
                    f"term {t.cell_id}: {len(t.factors)} factors exceed ambient dimension {self.ambient_dimension}"
                )


@dataclass(frozen=True)
class PoleReport:
    candidate: Fraction
    order: int
    is_largest: bool = False
    witnesses: tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {
            "s0": frac_str(self.candidate),
            "order": self.order,
            "largest": self.is_largest,
            "witnesses": list(self.witnesses),
        }


# ---------------------------------------------------------------------------
# expressions
# ---------------------------------------------------------------------------


def _require_hypersurface(c: StrataComplex):
    if c.mode != HYPERSURFACE:
        raise ZetaInputError("zeta functions are defined in hypersurface mode")


def _factors(c: StrataComplex, cell) -> tuple[tuple[int, int], ...]:
    return tuple(sorted((c.vertex_map[v].nu, c.vertex_map[v].N) for v in cell.vertices))


def topological_expression(c: StrataComplex) -> ZetaExpression:
    _require_hypersurface(c)
    terms = []
    for cell in c.cells:
        if not c.is_over_x(cell):
            continue
        if cell.chi_over_x is None:
            raise ZetaInputError(f"cell {cell.id}: chi_over_x missing on a cell over x")
        if cell.chi_over_x:
            terms.append(ZetaTerm(cell.id, Fraction(cell.chi_over_x), _factors(c, cell)))
    return ZetaExpression(TOPOLOGICAL, tuple(terms), c.ambient_dimension)


def cell_poincare(cell) -> LaurentPoly | None:
    """Poincare polynomial in ``u`` of the stratum over x (``L -> u^2``)."""
    if cell.poincare_over_x is not None:
        return cell.poincare_over_x.with_var("u")
    if cell.class_over_x is not None:
        return cell.class_over_x.rescale(2, "u")
    return None


def naive_expression(c: StrataComplex) -> ZetaExpression:
    _require_hypersurface(c)
    terms = []
    for cell in c.cells:
        if not c.is_over_x(cell):
            continue
        p = cell_poincare(cell)
        if p is None:
            raise ZetaInputError(f"cell {cell.id}: class_over_x missing on a cell over x")
        if not p:
            continue
        coeff = LaurentPoly({2: 1, 0: -1}, "u") ** len(cell.vertices) * p
        terms.append(ZetaTerm(cell.id, coeff, _factors(c, cell)))
    return ZetaExpression(NAIVE, tuple(terms), c.ambient_dimension)


# ---------------------------------------------------------------------------
# topological zeta
# ---------------------------------------------------------------------------


def evaluate_topological(expr: ZetaExpression) -> RationalFunction:
    """Exact sum of ``chi * prod 1/(N s + nu)``, canonical."""
    zero = Fraction(0)
    if not expr.terms:
        return RationalFunction(Poly((), "s"), Poly((1,), "s"))
    counts = [Counter(Fraction(nu, N) for nu, N in t.factors) for t in expr.terms]
    exps: dict[Fraction, int] = {}
    for cnt in counts:
        for r, k in cnt.items():
            exps[r] = max(exps.get(r, 0), k)
    roots = sorted(exps)
    lin = {r: Poly((r, 1), "s") for r in roots}
    num = Poly((), "s", zero)
    # fixed reduction order: terms in cell order
    for t, cnt in zip(expr.terms, counts):
        scalar = t.coefficient
        for _, N in t.factors:
            scalar /= N
        part = Poly((scalar,), "s")
        for r in roots:
            k = exps[r] - cnt.get(r, 0)
            if k:
                part = part * lin[r] ** k
        num = num + part
    den = Poly((1,), "s")
    for r in roots:
        den = den * lin[r] ** exps[r]
    return normalize(RationalFunction(num, den, tuple((lin[r], exps[r]) for r in roots)))


def topological_zeta(c: StrataComplex) -> RationalFunction:
    return evaluate_topological(topological_expression(c))


# ---------------------------------------------------------------------------
# naive zeta, Poincare-specialized
# ---------------------------------------------------------------------------

Bivariate = dict  # (u exponent, T exponent) -> Fraction


def _bmul(a: Bivariate, b: Bivariate) -> Bivariate:
    out: dict = {}
    for (e1, t1), c1 in a.items():
        for (e2, t2), c2 in b.items():
            k = (e1 + e2, t1 + t2)
            v = out.get(k, 0) + c1 * c2
            if v:
                out[k] = v
            else:
                out.pop(k, None)
    return out


def _badd(a: Bivariate, b: Bivariate) -> Bivariate:
    out = dict(a)
    for k, c in b.items():
        v = out.get(k, 0) + c
        if v:
            out[k] = v
        else:
            out.pop(k, None)
    return out


def _binomial(nu: int, N: int) -> Bivariate:
    # 1 - u^(-2 nu) T^N
    return {(0, 0): Fraction(1), (-2 * nu, N): Fraction(-1)}


def _to_poly(b: Bivariate, D: int, var: str = "w") -> Poly:
    by_t: dict[int, dict[int, Fraction]] = {}
    for (e, t), c in b.items():
        by_t.setdefault(t, {})[e * D] = c
    zero = LaurentPoly({}, var)
    return Poly.from_terms({t: LaurentPoly(d, var) for t, d in by_t.items()}, "T", zero)


@dataclass(frozen=True)
class SpecializedZeta:
    """Specialized naive zeta ``num/den`` in ``T`` over ``QQ(w)``, ``u = w^D``.

    ``function`` is an exact but not necessarily reduced representative
    whose denominator is ``prod (1 - w^(-2 nu D) T^N)^e`` (see ``factors``).
    """

    function: RationalFunction
    rescaling: ExponentRescaling
    factors: tuple[tuple[tuple[int, int], int], ...]
    expression: ZetaExpression = field(repr=False, compare=False, default=None)

    @property
    def D(self) -> int:
        return self.rescaling.factor

    @cached_property
    def canonical(self) -> RationalFunction:
        return normalize(self.function)

    def point(self, s0) -> LaurentPoly:
        """``T0 = L^(-s0) = w^(-2 D s0)``."""
        k = -2 * self.D * Fraction(s0)
        if k.denominator != 1:
            raise RuntimeError(f"rescaling bug: T0 exponent {k} for s0 = {s0} is not integral (D = {self.D})")
        return LaurentPoly.monomial(int(k), 1, self.rescaling.target)

    def order_at(self, s0) -> int:
        return pole_order_at(self.function, self.point(s0))


def rescale_factor(c: StrataComplex) -> int:
    return 2 * lcm(*[v.N for v in c.vertices]) if c.vertices else 2


def evaluate_naive(expr: ZetaExpression, D: int) -> SpecializedZeta:
    rescaling = ExponentRescaling("u", "w", D)
    if not expr.terms:
        zero = LaurentPoly({}, "w")
        rf = RationalFunction(Poly((), "T", zero), Poly((LaurentPoly.constant(1, "w"),), "T", zero))
        return SpecializedZeta(rf, rescaling, (), expr)
    counts = [Counter(t.factors) for t in expr.terms]
    exps: dict[tuple[int, int], int] = {}
    for cnt in counts:
        for f, k in cnt.items():
            exps[f] = max(exps.get(f, 0), k)
    # sorted by (N, nu): the (b, a) order of the factors (1 - L^a T^b)
    keys = sorted(exps, key=lambda f: (f[1], -f[0]))
    binom = {f: _binomial(*f) for f in keys}
    power_cache: dict[tuple, Bivariate] = {}

    def bpow(f, k):
        key = (f, k)
        if key not in power_cache:
            acc = {(0, 0): Fraction(1)}
            for _ in range(k):
                acc = _bmul(acc, binom[f])
            power_cache[key] = acc
        return power_cache[key]

    num: Bivariate = {}
    for t, cnt in zip(expr.terms, counts):
        part: Bivariate = {(e, 0): c for e, c in t.coefficient.terms.items()}
        mono_u = sum(-2 * nu for nu, _ in t.factors)
        mono_t = sum(N for _, N in t.factors)
        part = {(e + mono_u, mono_t): c for (e, _), c in part.items()}
        for f in keys:
            k = exps[f] - cnt.get(f, 0)
            if k:
                part = _bmul(part, bpow(f, k))
        num = _badd(num, part)
    den: Bivariate = {(0, 0): Fraction(1)}
    for f in keys:
        den = _bmul(den, bpow(f, exps[f]))
    factor_polys = tuple((_to_poly(binom[f], D), exps[f]) for f in keys)
    rf = RationalFunction(_to_poly(num, D), _to_poly(den, D), factor_polys)
    return SpecializedZeta(rf, rescaling, tuple((f, exps[f]) for f in keys), expr)


def naive_zeta_specialized(c: StrataComplex) -> SpecializedZeta:
    return evaluate_naive(naive_expression(c), rescale_factor(c))


# ---------------------------------------------------------------------------
# poles
# ---------------------------------------------------------------------------


def candidate_poles(c: StrataComplex) -> list[Fraction]:
    """Sorted distinct ``-nu/N`` (over vertices meeting x in hypersurface mode)."""
    vs = [v for v in c.vertices if v.meets_x or c.mode != HYPERSURFACE]
    return sorted({-v.weight for v in vs})


def _witnesses(expr: ZetaExpression | None, s0: Fraction) -> tuple[str, ...]:
    if expr is None:
        return ()
    return tuple(t.cell_id for t in expr.terms if any(Fraction(-nu, N) == s0 for nu, N in t.factors))


def topological_order(rf: RationalFunction, s0) -> int:
    canon = normalize(rf)
    return root_multiplicity(canon.den, Fraction(s0))


def pole_spectrum(z, candidates, expression: ZetaExpression | None = None, bound: int | None = None) -> list[PoleReport]:
    """Order of ``z`` at each candidate, largest actual pole flagged.

    ``z`` is a topological zeta (:class:`RationalFunction` in ``s``) or a
    :class:`SpecializedZeta`.  Orders of the latter are the specialized
    orders in ``T`` at ``T0 = L^(-s0)``.
    """
    cands = sorted({Fraction(s) for s in candidates})
    if isinstance(z, SpecializedZeta):
        expression = expression or z.expression
        orders = [z.order_at(s0) for s0 in cands]
    else:
        canon = normalize(z)
        orders = [root_multiplicity(canon.den, s0) if canon.num else 0 for s0 in cands]
    if bound is not None:
        for s0, k in zip(cands, orders):
            if k > bound:
                raise RuntimeError(f"pole order {k} at {s0} exceeds ambient dimension {bound}")
    largest = max((s0 for s0, k in zip(cands, orders) if k >= 1), default=None)
    return [
        PoleReport(s0, k, s0 == largest, _witnesses(expression, s0) if k else ())
        for s0, k in zip(cands, orders)
    ]


def leading_coefficient_at(rf: RationalFunction, s0, order: int) -> Fraction:
    """``lim_{s -> s0} (s - s0)^order * rf(s)`` for a topological zeta."""
    canon = normalize(rf)
    root = Fraction(s0)
    den = canon.den
    lin = Poly((-root, 1), canon.var)
    for _ in range(order):
        den, r = den.divmod(lin)
        if r:
            raise ValueError(f"denominator has fewer than {order} factors (s - {s0})")
    value = den(root)
    if not value:
        raise ValueError(f"pole order at {s0} exceeds {order}")
    return canon.num(root) / value


def render_topological(rf: RationalFunction) -> str:
    """Factored rendering ``(4*s + 5)/((s + 1)*(6*s + 5))``.

    The denominator is split into primitive integer linear factors
    ``(q s + p)`` sorted by ``(q, p)``; the numerator absorbs the scalar.
    Falls back to the expanded canonical form when the denominator does not
    split over the rationals.
    """
    canon = normalize(rf)
    if not canon.num:
        return "0"
    den = canon.den
    factors: list[tuple[Fraction, int]] = []
    for r in _rational_roots(den):
        k = root_multiplicity(den, r)
        factors.append((r, k))
    degree = sum(k for _, k in factors)
    if degree != den.degree():
        return expanded(canon)
    scale = Fraction(1)
    parts = []
    for r, k in sorted(factors, key=lambda rk: (rk[0].denominator, -rk[0].numerator)):
        q, p = r.denominator, -r.numerator  # s - r -> (q s - q r)/q
        scale *= Fraction(q) ** k
        lin = Poly((Fraction(p), Fraction(q)), canon.var).render()
        parts.append(f"({lin})" + (f"^{k}" if k > 1 else ""))
    num = canon.num.scale(scale)
    num_s = num.render()
    if len(num.coeffs) > 1 and sum(1 for x in num.coeffs if x) > 1:
        num_s = f"({num_s})"
    if not parts:
        return num_s
    den_s = parts[0] if len(parts) == 1 else "(" + "*".join(parts) + ")"
    return f"{num_s}/{den_s}"


def _rational_roots(p: Poly) -> list[Fraction]:
    """Rational roots of a polynomial over QQ (rational root theorem)."""
    from math import gcd as _gcd

    coeffs = list(p.coeffs)
    while coeffs and not coeffs[0]:
        coeffs.pop(0)
    roots = [Fraction(0)] if len(coeffs) != len(p.coeffs) else []
    if len(coeffs) <= 1:
        return roots
    den_lcm = lcm(*[c.denominator for c in coeffs])
    ints = [int(c * den_lcm) for c in coeffs]
    a0, an = abs(ints[0]), abs(ints[-1])

    def divisors(n):
        out = set()
        i = 1
        while i * i <= n:
            if n % i == 0:
                out.add(i)
                out.add(n // i)
            i += 1
        return out

    for a in divisors(a0):
        for b in divisors(an):
            if _gcd(a, b) != 1:
                continue
            for sign in (1, -1):
                r = Fraction(sign * a, b)
                if not p(r):
                    roots.append(r)
    return sorted(set(roots))


def expanded(rf: RationalFunction) -> str:
    canon = normalize(rf)
    if canon.den.is_constant():
        return canon.num.render()
    n = canon.num.render()
    if sum(1 for x in canon.num.coeffs if x) > 1:
        n = f"({n})"
    return f"{n}/({canon.den.render()})"


def render_naive(z: SpecializedZeta) -> str:
    """Canonical rendering of the specialized naive zeta in ``T`` over ``QQ(w)``.

    Factored part first: surviving factors ``(1 - w^a*T^b)`` sorted by
    ``(b, a)``; then the fully expanded canonical form after ``;``.
    """
    canon = z.canonical
    if not canon.num:
        return "0"
    parts = []
    kept = []
    for f, m in canon.den_factors:
        if f[0]:
            f = f.scale(_inv(f[0]))  # 1 - c*w^a*T^b
        kept.append((f, m))
    scale = None
    if kept:
        prod = Poly((canon.den.one,), "T", canon.den.zero)
        for f, m in kept:
            prod = prod * f**m
        if prod.monic() == canon.den:
            scale = prod.leading_coefficient()
            for f, m in sorted(kept, key=lambda fm: _factor_key(fm[0])):
                body = _binomial_str(f)
                parts.append(f"({body})" + (f"^{m}" if m > 1 else ""))
    full = expanded(canon)
    if scale is None:
        return full
    num = canon.num.scale(scale)
    n = num.render()
    if sum(1 for x in num.coeffs if x) > 1:
        n = f"({n})"
    factored = f"{n}/" + ("*".join(parts) if len(parts) == 1 else "(" + "*".join(parts) + ")")
    return f"{factored} ; {full}"


def _binomial_str(f: Poly) -> str:
    support = [i for i, c in enumerate(f.coeffs) if c]
    if len(support) == 2 and support[0] == 0 and f[0] == f.one:
        b = support[1]
        c = -f[b]
        mono = f"{f.var}^{b}" if b > 1 else f.var
        text = c.render() if hasattr(c, "render") else frac_str(c)
        if text.startswith("-"):
            return f"1 + {text[1:]}*{mono}" if " " not in text else f"1 - ({text})*{mono}"
        return f"1 - {text}*{mono}" if " " not in text else f"1 - ({text})*{mono}"
    return f.render()


def _inv(c):
    return c.inverse() if hasattr(c, "inverse") else 1 / c


def _factor_key(f: Poly):
    top = f.degree()
    lead = f.leading_coefficient()
    try:
        a = lead.num.valuation() if hasattr(lead, "num") else lead.valuation()
    except ValueError:
        a = 0
    return (top, a)
