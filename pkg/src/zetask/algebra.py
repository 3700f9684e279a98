"""Exact arithmetic: Laurent polynomials, univariate polynomials over
``QQ`` / ``QQ[w, 1/w]`` / ``QQ(w)``, and rational functions built on them.

Rationals are :class:`fractions.Fraction`.  Every value here is immutable.

Canonical form of a :class:`RationalFunction` (the "monic convention"):
the denominator is monic in the main variable, numerator and denominator
are coprime, and any scalar (an element of ``QQ`` or ``QQ(w)``) is folded
into the numerator.  For ``QQ(w)`` coefficients, each coefficient is itself
canonical: ``num/den`` with ``den`` a monic polynomial in ``w`` with nonzero
constant term and ``gcd(num, den) = 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd
from numbers import Rational as _RationalABC
from typing import Iterable, Mapping, Sequence, Union

Rational = Fraction


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, _RationalABC)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"not an exact rational: {value!r}")


def frac_str(q) -> str:
    """Render a rational as ``"a/b"`` (``"a"`` when integral)."""
    q = as_fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------------------
# Laurent polynomials
# ---------------------------------------------------------------------------


class LaurentPoly:
    """Finite sum ``sum c_e * var^e`` with ``e`` in ZZ and ``c_e`` in QQ."""

    __slots__ = ("var", "_terms", "_hash")

    def __init__(self, terms: Mapping[int, object] | None = None, var: str = "u"):
        clean: dict[int, Fraction] = {}
        if terms:
            for e, c in terms.items():
                c = as_fraction(c)
                if c:
                    clean[int(e)] = c
        self.var = var
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict[int, Fraction], var: str) -> "LaurentPoly":
        # trusted constructor: no zero coefficients, Fraction values
        obj = cls.__new__(cls)
        obj.var = var
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def monomial(cls, exponent: int, coeff=1, var: str = "u") -> "LaurentPoly":
        return cls({exponent: coeff}, var)

    @classmethod
    def constant(cls, coeff, var: str = "u") -> "LaurentPoly":
        return cls({0: coeff}, var)

    # -- inspection -------------------------------------------------------
    @property
    def terms(self) -> dict[int, Fraction]:
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items())

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def degree(self) -> int:
        if not self._terms:
            raise ValueError("degree of zero Laurent polynomial")
        return max(self._terms)

    def valuation(self) -> int:
        if not self._terms:
            raise ValueError("valuation of zero Laurent polynomial")
        return min(self._terms)

    def leading_coefficient(self) -> Fraction:
        return self._terms[self.degree()] if self._terms else Fraction(0)

    def coefficient(self, exponent: int) -> Fraction:
        return self._terms.get(exponent, Fraction(0))

    def constant_value(self):
        """The value as a Fraction when the polynomial is constant, else None."""
        if not self._terms:
            return Fraction(0)
        if len(self._terms) == 1 and 0 in self._terms:
            return self._terms[0]
        return None

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            if other.var != self.var and other._terms and self._terms:
                # constants are variable-agnostic
                if other.constant_value() is not None:
                    return LaurentPoly._raw(dict(other._terms), self.var)
                if self.constant_value() is None:
                    raise ValueError(f"variable mismatch: {self.var} vs {other.var}")
            return other
        if isinstance(other, (int, Fraction, _RationalABC)):
            c = as_fraction(other)
            return LaurentPoly._raw({0: c} if c else {}, self.var)
        return NotImplemented

    def _result_var(self, other: "LaurentPoly") -> str:
        if self.constant_value() is not None and other.constant_value() is None:
            return other.var
        return self.var

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self._terms)
        for e, c in other._terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return LaurentPoly._raw(out, self._result_var(other))

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw({e: -c for e, c in self._terms.items()}, self.var)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out: dict[int, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = e1 + e2
                v = out.get(e, 0) + c1 * c2
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
        return LaurentPoly._raw(out, self._result_var(other))

    __rmul__ = __mul__

    def scale_shift(self, coeff, shift: int) -> "LaurentPoly":
        """Multiply by the monomial ``coeff * var^shift``."""
        coeff = as_fraction(coeff)
        if not coeff:
            return LaurentPoly._raw({}, self.var)
        return LaurentPoly._raw({e + shift: c * coeff for e, c in self._terms.items()}, self.var)

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = LaurentPoly._raw({0: Fraction(1)}, self.var)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def is_unit(self) -> bool:
        return self.is_monomial()

    def inverse(self) -> "LaurentPoly":
        if not self.is_monomial():
            raise ZeroDivisionError(f"{self} is not a unit in QQ[{self.var}, 1/{self.var}]")
        (e, c), = self._terms.items()
        return LaurentPoly._raw({-e: 1 / c}, self.var)

    def __truediv__(self, other):
        if isinstance(other, LaurentPoly):
            return self * other.inverse()
        c = as_fraction(other)
        if not c:
            raise ZeroDivisionError("division by zero")
        return self.scale_shift(1 / c, 0)

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            if self._terms != other._terms:
                return False
            return self.var == other.var or self.constant_value() is not None
        if isinstance(other, (int, Fraction, _RationalABC)):
            return self.constant_value() == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            cv = self.constant_value()
            self._hash = hash(cv) if cv is not None else hash((self.var, frozenset(self._terms.items())))
        return self._hash

    # -- maps -------------------------------------------------------------
    def __call__(self, value):
        value = as_fraction(value)
        total = Fraction(0)
        for e, c in self._terms.items():
            if e < 0 and not value:
                raise ZeroDivisionError("negative exponent evaluated at 0")
            total += c * value**e
        return total

    def rescale(self, factor: int, var: str | None = None) -> "LaurentPoly":
        return LaurentPoly._raw({e * factor: c for e, c in self._terms.items()}, var or self.var)

    def with_var(self, var: str) -> "LaurentPoly":
        return LaurentPoly._raw(dict(self._terms), var)

    def exponent_gcd(self) -> int:
        return reduce(gcd, self._terms, 0)

    # -- rendering --------------------------------------------------------
    def render(self) -> str:
        if not self._terms:
            return "0"
        return _render_terms(
            [(c, _monomial_str(self.var, e)) for e, c in sorted(self._terms.items(), reverse=True)]
        )

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"LaurentPoly({self.render()!r}, var={self.var!r})"

    def to_triples(self) -> list[list[int]]:
        """Serialization as ``[[exponent, numerator, denominator], ...]``."""
        return [[e, c.numerator, c.denominator] for e, c in sorted(self._terms.items())]

    @classmethod
    def from_triples(cls, triples: Iterable[Sequence[int]], var: str) -> "LaurentPoly":
        terms: dict[int, Fraction] = {}
        for e, n, d in triples:
            terms[int(e)] = terms.get(int(e), Fraction(0)) + Fraction(int(n), int(d))
        return cls(terms, var)


def _monomial_str(var: str, e: int) -> str:
    if e == 0:
        return ""
    if e == 1:
        return var
    return f"{var}^{e}" if e > 0 else f"{var}^({e})"


def _render_terms(pairs: list[tuple[Fraction, str]]) -> str:
    """Join ``coeff*monomial`` pairs with signs; ``monomial == ''`` is a constant."""
    out = []
    for idx, (c, mono) in enumerate(pairs):
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if mono == "":
            body = frac_str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{frac_str(a)}*{mono}"
        if idx == 0:
            out.append(("-" if sign == "-" else "") + body)
        else:
            out.append(f" {sign} {body}")
    return "".join(out)


def rescale_exponents(p: LaurentPoly, D: int, var: str = "w") -> LaurentPoly:
    """Substitute ``p.var = var^D``: every exponent ``e`` becomes ``D*e``."""
    if not isinstance(D, int) or D <= 0:
        raise ValueError(f"rescale factor must be a positive integer, got {D!r}")
    return p.rescale(D, var)


@dataclass(frozen=True)
class ExponentRescaling:
    """Record of the substitution ``base = target^factor``."""

    base: str = "u"
    target: str = "w"
    factor: int = 1

    def __post_init__(self):
        if not isinstance(self.factor, int) or self.factor < 1:
            raise ValueError(f"rescale factor must be >= 1, got {self.factor!r}")

    def apply(self, p: LaurentPoly) -> LaurentPoly:
        if p.var != self.base and p.constant_value() is None:
            raise ValueError(f"expected a polynomial in {self.base}, got one in {p.var}")
        return rescale_exponents(p, self.factor, self.target)

    def then(self, other: "ExponentRescaling") -> "ExponentRescaling":
        """Compose: first ``self`` then ``other`` (``other.base`` must be ``self.target``)."""
        if other.base != self.target:
            raise ValueError("rescalings do not chain")
        return ExponentRescaling(self.base, other.target, self.factor * other.factor)


# ---------------------------------------------------------------------------
# dense QQ[x] helpers (low degree first) used for QQ(w) canonicalization
# ---------------------------------------------------------------------------


def _dense_trim(a: list[Fraction]) -> list[Fraction]:
    while a and not a[-1]:
        a.pop()
    return a


def _dense_divmod(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    a = list(a)
    if not b:
        raise ZeroDivisionError("division by zero polynomial")
    db = len(b) - 1
    inv = 1 / b[-1]
    q = [Fraction(0)] * max(len(a) - db, 0)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i]
        if not c:
            continue
        c = c * inv
        q[i - db] = c
        for j in range(db + 1):
            a[i - db + j] -= c * b[j]
    return _dense_trim(q), _dense_trim(a[:db])


def _dense_gcd(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a, b = _dense_trim(list(a)), _dense_trim(list(b))
    while b:
        a, b = b, _dense_divmod(a, b)[1]
    if not a:
        return []
    lc = a[-1]
    return [c / lc for c in a]


def _laurent_to_dense(p: LaurentPoly) -> tuple[int, list[Fraction]]:
    """Split ``p = var^v * q`` with ``q`` a dense polynomial, ``q(0) != 0``."""
    if not p:
        return 0, []
    v = p.valuation()
    dense = [Fraction(0)] * (p.degree() - v + 1)
    for e, c in p._terms.items():
        dense[e - v] = c
    return v, dense


def _dense_to_laurent(dense: Sequence[Fraction], shift: int, var: str) -> LaurentPoly:
    return LaurentPoly._raw({i + shift: c for i, c in enumerate(dense) if c}, var)


# ---------------------------------------------------------------------------
# QQ(w)
# ---------------------------------------------------------------------------


class LaurentFraction:
    """Canonical element ``num/den`` of the field ``QQ(var)``."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, var: str | None = None, _canonical: bool = False):
        if not isinstance(num, LaurentPoly):
            num = LaurentPoly.constant(num, var or "w")
        if den is None:
            den = LaurentPoly.constant(1, num.var)
        elif not isinstance(den, LaurentPoly):
            den = LaurentPoly.constant(den, num.var)
        if var is not None:
            if num.constant_value() is not None:
                num = num.with_var(var)
            if den.constant_value() is not None:
                den = den.with_var(var)
        if not den:
            raise ZeroDivisionError("division by zero polynomial")
        if not _canonical:
            num, den = self._reduce(num, den)
        self.num = num
        self.den = den

    @property
    def var(self) -> str:
        return self.num.var if self.num.constant_value() is None else self.den.var

    @staticmethod
    def _reduce(num: LaurentPoly, den: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly]:
        var = den.var if den.constant_value() is None else num.var
        if not num:
            return LaurentPoly._raw({}, var), LaurentPoly._raw({0: Fraction(1)}, var)
        vn, dn = _laurent_to_dense(num)
        vd, dd = _laurent_to_dense(den)
        if len(dd) > 1 and len(dn) > 1:
            g = _dense_gcd(dn, dd)
            if len(g) > 1:
                dn = _dense_divmod(dn, g)[0]
                dd = _dense_divmod(dd, g)[0]
        lc = dd[-1]
        if lc != 1:
            dn = [c / lc for c in dn]
            dd = [c / lc for c in dd]
        return _dense_to_laurent(dn, vn - vd, var), _dense_to_laurent(dd, 0, var)

    @classmethod
    def zero(cls, var: str = "w") -> "LaurentFraction":
        return cls(LaurentPoly({}, var), LaurentPoly.constant(1, var), _canonical=True)

    def __bool__(self):
        return bool(self.num)

    def is_zero(self) -> bool:
        return not self.num

    def _coerce(self, other):
        if isinstance(other, LaurentFraction):
            return other
        if isinstance(other, LaurentPoly):
            return LaurentFraction(other, None, _canonical=True)
        if isinstance(other, (int, Fraction, _RationalABC)):
            return LaurentFraction(LaurentPoly.constant(other, self.var), None, _canonical=True)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if not o.num:
            return self
        if not self.num:
            return o
        if self.den == o.den:
            return LaurentFraction(self.num + o.num, self.den)
        return LaurentFraction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return LaurentFraction(-self.num, self.den, _canonical=True)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if not self.num or not o.num:
            return LaurentFraction.zero(self.var)
        return LaurentFraction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "LaurentFraction":
        if not self.num:
            raise ZeroDivisionError("division by zero in QQ(w)")
        return LaurentFraction(self.den, self.num)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def render(self) -> str:
        if self.den == 1:
            return self.num.render()
        n = self.num.render()
        if len(self.num._terms) > 1:
            n = f"({n})"
        return f"{n}/({self.den.render()})"

    def __repr__(self):
        return f"LaurentFraction({self.render()!r})"


def _inverse(c):
    if isinstance(c, (LaurentPoly, LaurentFraction)):
        return c.inverse()
    if not c:
        raise ZeroDivisionError("division by zero")
    return 1 / Fraction(c)


Coefficient = Union[Fraction, LaurentPoly, LaurentFraction]


# ---------------------------------------------------------------------------
# univariate polynomials with exact coefficients
# ---------------------------------------------------------------------------


class Poly:
    """Dense polynomial ``sum coeffs[i] * var^i``.

    ``zero`` fixes the coefficient type: ``Fraction(0)`` for QQ,
    ``LaurentPoly({}, 'w')`` for the Laurent ring, ``LaurentFraction.zero('w')``
    for the field QQ(w).
    """

    __slots__ = ("coeffs", "var", "zero")

    def __init__(self, coeffs: Iterable = (), var: str = "s", zero: Coefficient = Fraction(0)):
        cs = [zero + c if not isinstance(c, type(zero)) else c for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)
        self.var = var
        self.zero = zero

    @classmethod
    def _raw(cls, coeffs: list, var: str, zero) -> "Poly":
        while coeffs and not coeffs[-1]:
            coeffs.pop()
        obj = cls.__new__(cls)
        obj.coeffs = tuple(coeffs)
        obj.var = var
        obj.zero = zero
        return obj

    @classmethod
    def from_terms(cls, terms: Mapping[int, Coefficient], var: str, zero: Coefficient) -> "Poly":
        if not terms:
            return cls((), var, zero)
        top = max(terms)
        cs = [zero] * (top + 1)
        for i, c in terms.items():
            if i < 0:
                raise ValueError("negative exponent in a polynomial")
            cs[i] = cs[i] + c
        return cls._raw(cs, var, zero)

    def constant(self, c) -> "Poly":
        return Poly._raw([self.zero + c], self.var, self.zero)

    @property
    def one(self):
        return self.zero + 1

    # -- inspection -------------------------------------------------------
    def __bool__(self):
        return bool(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def leading_coefficient(self):
        return self.coeffs[-1] if self.coeffs else self.zero

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def __getitem__(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.zero

    # -- arithmetic -------------------------------------------------------
    def _lift(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.var != self.var and not (other.is_constant() or self.is_constant()):
                raise ValueError(f"variable mismatch: {self.var} vs {other.var}")
            return other
        return Poly._raw([self.zero + other], self.var, self.zero)

    def __add__(self, other):
        o = self._lift(other)
        a, b = self.coeffs, o.coeffs
        if len(a) < len(b):
            a, b = b, a
        cs = list(a)
        for i, c in enumerate(b):
            cs[i] = cs[i] + c
        return Poly._raw(cs, self.var, self.zero)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw([-c for c in self.coeffs], self.var, self.zero)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = self.zero + other
            return Poly._raw([x * c for x in self.coeffs], self.var, self.zero)
        if not self.coeffs or not other.coeffs:
            return Poly._raw([], self.var, self.zero)
        cs = [self.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    cs[i + j] = cs[i + j] + a * b
        return Poly._raw(cs, self.var, self.zero)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = self.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c) -> "Poly":
        return Poly._raw([x * c for x in self.coeffs], self.var, self.zero)

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        """Long division; the divisor's leading coefficient must be invertible."""
        if not other:
            raise ZeroDivisionError("division by zero polynomial")
        inv = _inverse(other.leading_coefficient())
        a = list(self.coeffs)
        db = other.degree()
        q = [self.zero] * max(len(a) - db, 0)
        for i in range(len(a) - 1, db - 1, -1):
            c = a[i]
            if not c:
                continue
            c = c * inv
            q[i - db] = c
            for j, b in enumerate(other.coeffs):
                if b:
                    a[i - db + j] = a[i - db + j] - c * b
        return Poly._raw(q, self.var, self.zero), Poly._raw(a[:db], self.var, self.zero)

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def exact_div(self, other: "Poly") -> "Poly":
        q, r = self.divmod(other)
        if r:
            raise ArithmeticError("inexact polynomial division")
        return q

    def monic(self) -> "Poly":
        if not self:
            return self
        return self.scale(_inverse(self.leading_coefficient()))

    def gcd(self, other: "Poly") -> "Poly":
        """Monic gcd (coefficients must form a field)."""
        a, b = self, other
        while b:
            a, b = b, a % b
        return a.monic() if a else a

    def __eq__(self, other):
        if isinstance(other, Poly):
            if len(self.coeffs) != len(other.coeffs):
                return False
            return all(x == y for x, y in zip(self.coeffs, other.coeffs))
        if not self.coeffs:
            return other == 0
        return len(self.coeffs) == 1 and self.coeffs[0] == other

    def __hash__(self):
        return hash((self.var, self.coeffs))

    # -- maps -------------------------------------------------------------
    def __call__(self, x):
        acc = self.zero
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "Poly":
        return Poly._raw([c * i for i, c in enumerate(self.coeffs)][1:], self.var, self.zero)

    def map_coeffs(self, fn, zero) -> "Poly":
        return Poly._raw([fn(c) for c in self.coeffs], self.var, zero)

    def synthetic_division(self, root) -> tuple["Poly", Coefficient]:
        """Divide by the monic ``(var - root)``: returns (quotient, remainder)."""
        n = len(self.coeffs)
        if n == 0:
            return self, self.zero
        monomial = None
        if isinstance(root, LaurentPoly) and root.is_monomial():
            (k, c), = root._terms.items()
            monomial = (c, k)
        q = [self.zero] * (n - 1)
        acc = self.coeffs[-1]
        for i in range(n - 2, -1, -1):
            q[i] = acc
            step = acc.scale_shift(monomial[0], monomial[1]) if monomial else acc * root
            acc = self.coeffs[i] + step
        return Poly._raw(q, self.var, self.zero), acc

    def render(self) -> str:
        if not self.coeffs:
            return "0"
        if isinstance(self.zero, Fraction):
            pairs = [(c, _monomial_str(self.var, i)) for i, c in reversed(list(enumerate(self.coeffs))) if c]
            return _render_terms(pairs)
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mono = _monomial_str(self.var, i)
            cstr = c.render()
            simple = isinstance(c, LaurentPoly) and c.is_monomial() or (
                isinstance(c, LaurentFraction) and c.den == 1 and c.num.is_monomial()
            )
            if not simple:
                cstr = f"({cstr})"
            if mono:
                if cstr == "1":
                    term = mono
                elif cstr == "-1":
                    term = f"-{mono}"
                else:
                    term = f"{cstr}*{mono}"
            else:
                term = cstr
            parts.append(term)
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"Poly({self.render()!r}, var={self.var!r})"


def root_multiplicity(p: Poly, root) -> int:
    """Multiplicity of ``root`` as a root of ``p`` by repeated synthetic division."""
    if not p:
        raise ValueError("every value is a root of the zero polynomial")
    count = 0
    while True:
        q, r = p.synthetic_division(root)
        if r:
            return count
        count += 1
        p = q


# ---------------------------------------------------------------------------
# rational functions
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class RationalFunction:
    """``num/den`` in one variable.

    Not necessarily canonical: :func:`normalize` produces the canonical
    representative.  ``den_factors`` optionally records a factorization of
    ``den`` as ``((factor, multiplicity), ...)`` which speeds up
    normalization and enables the factored rendering.
    """

    num: Poly
    den: Poly
    den_factors: tuple = ()

    def __post_init__(self):
        if not self.den:
            raise ZeroDivisionError("division by zero polynomial")

    @property
    def var(self) -> str:
        return self.den.var

    @property
    def field(self) -> str:
        z = self.den.zero
        return "Q" if isinstance(z, Fraction) else f"Q({z.var})"

    def __eq__(self, other):
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return _as_field_poly(self.num) * _as_field_poly(other.den) == _as_field_poly(
            other.num
        ) * _as_field_poly(self.den)

    def __hash__(self):
        c = normalize(self)
        return hash((c.num, c.den))

    def _binary(self, other, op):
        if not isinstance(other, RationalFunction):
            one = self.den.constant(1)
            other = RationalFunction(one.constant(other) if not isinstance(other, Poly) else other, one)
        a, b = _coerce_pair(self, other)
        if op == "+":
            return RationalFunction(a.num * b.den + b.num * a.den, a.den * b.den)
        if op == "-":
            return RationalFunction(a.num * b.den - b.num * a.den, a.den * b.den)
        if op == "*":
            return RationalFunction(a.num * b.num, a.den * b.den)
        if op == "/":
            if not b.num:
                raise ZeroDivisionError("division by zero rational function")
            return RationalFunction(a.num * b.den, a.den * b.num)
        raise ValueError(op)

    def __add__(self, other):
        return self._binary(other, "+")

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, "-")

    def __mul__(self, other):
        return self._binary(other, "*")

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._binary(other, "/")

    def __neg__(self):
        return RationalFunction(-self.num, self.den, self.den_factors)

    def __call__(self, x):
        d = self.den(x)
        if not d:
            raise ZeroDivisionError("evaluation at a pole")
        return self.num(x) / d if not isinstance(d, LaurentPoly) else LaurentFraction(self.num(x), d)

    def is_zero(self) -> bool:
        return not self.num

    def render(self) -> str:
        c = normalize(self)
        if c.den.is_constant():
            return c.num.render()
        return f"{_wrap(c.num)}/{_wrap(c.den)}"

    def __repr__(self):
        return f"RationalFunction({self.num.render()!r} / {self.den.render()!r})"


def _wrap(p: Poly) -> str:
    text = p.render()
    if sum(1 for c in p.coeffs if c) > 1 or text.startswith("-"):
        return f"({text})"
    return text


def _as_field_poly(p: Poly) -> Poly:
    if isinstance(p.zero, LaurentPoly):
        z = LaurentFraction.zero(p.zero.var)
        return p.map_coeffs(lambda c: LaurentFraction(c, None, _canonical=True), z)
    return p


def _coerce_pair(a: RationalFunction, b: RationalFunction):
    za, zb = a.den.zero, b.den.zero
    if type(za) is type(zb):
        return a, b
    fa = RationalFunction(_as_field_poly(a.num), _as_field_poly(a.den))
    fb = RationalFunction(_as_field_poly(b.num), _as_field_poly(b.den))
    return fa, fb


def _exponent_gcd_of(p: Poly) -> int:
    g = 0
    for c in p.coeffs:
        g = gcd(g, c.exponent_gcd())
    return g


def normalize(rf: RationalFunction) -> RationalFunction:
    """Canonical representative: coprime, monic denominator, scalar in the numerator.

    Idempotent; two rational functions are equal iff their canonical
    forms are identical.
    """
    if not rf.den:
        raise ZeroDivisionError("division by zero polynomial")
    if isinstance(rf.den.zero, LaurentFraction):
        return _normalize_bivariate(rf.num, rf.den, rf.den_factors)
    if isinstance(rf.den.zero, LaurentPoly):
        return _normalize_laurent(rf)
    num, den = _as_field_poly(rf.num), _as_field_poly(rf.den)
    factors = tuple((_as_field_poly(f), m) for f, m in rf.den_factors)
    return _normalize_field(num, den, factors)


def _normalize_field(num: Poly, den: Poly, factors: tuple) -> RationalFunction:
    if not num:
        return RationalFunction(num, den.constant(1))
    kept: list[tuple[Poly, int]] = []
    if factors:
        for f, m in factors:
            left = 0
            for _ in range(m):
                g = num.gcd(f)
                if g.degree() <= 0:
                    left += 1
                    continue
                num = num.exact_div(g)
                den = den.exact_div(g)
                rest = f.exact_div(g)
                if rest.degree() > 0:
                    kept.append((rest, 1))
            if left:
                kept.append((f, left))
    else:
        g = num.gcd(den)
        if g.degree() > 0:
            num, den = num.exact_div(g), den.exact_div(g)
    lc = den.leading_coefficient()
    inv = _inverse(lc)
    num, den = num.scale(inv), den.scale(inv)
    return RationalFunction(num, den, tuple(kept))


def _normalize_laurent(rf: RationalFunction) -> RationalFunction:
    # Contract w -> w^(1/g) when every exponent is a multiple of g; gcds are
    # invariant under the field extension QQ(w^g) c QQ(w), so this is exact.
    var = rf.den.zero.var
    g = gcd(_exponent_gcd_of(rf.num), _exponent_gcd_of(rf.den))
    for f, _ in rf.den_factors:
        g = gcd(g, _exponent_gcd_of(f))
    g = g or 1

    def contract(p: Poly) -> Poly:
        if g == 1:
            return _as_field_poly(p)
        z = LaurentFraction.zero(var)
        return p.map_coeffs(
            lambda c: LaurentFraction(
                LaurentPoly._raw({e // g: v for e, v in c._terms.items()}, var), None, _canonical=True
            ),
            z,
        )

    def expand(p: Poly) -> Poly:
        if g == 1:
            return p
        return p.map_coeffs(
            lambda c: LaurentFraction(c.num.rescale(g), c.den.rescale(g), _canonical=True), p.zero
        )

    factors = tuple((contract(f), m) for f, m in rf.den_factors)
    out = _normalize_bivariate(contract(rf.num), contract(rf.den), factors)
    return RationalFunction(
        expand(out.num), expand(out.den), tuple((expand(f), m) for f, m in out.den_factors)
    )


def _normalize_bivariate(num: Poly, den: Poly, factors: tuple) -> RationalFunction:
    """Cancellation over QQ(w) done in QQ[w, T] after clearing denominators.

    Euclid over QQ(w) suffers coefficient swell; sparse multivariate gcds
    do not, and Gauss's lemma makes the two agree up to units of QQ(w).
    """
    from sympy.polys.domains import QQ
    from sympy.polys.rings import ring

    R, _, _ = ring("w,T", QQ)
    wvar, tvar = den.zero.var, den.var
    zero = LaurentFraction.zero(wvar)
    if not num:
        return RationalFunction(Poly((), tvar, zero), Poly((zero + 1,), tvar, zero))

    def lift(p: LaurentPoly, shift: int, j: int = 0):
        return R({(e + shift, j): QQ(c.numerator, c.denominator) for e, c in p._terms.items()})

    def to_ring(p: Poly):
        # p = E / S with E in QQ[w, T] and S in QQ[w]
        cs = [(j, c) for j, c in enumerate(p.coeffs) if c]
        dens = [lift(c.den, 0) for _, c in cs]
        L = reduce(lambda a, b: a.lcm(b), dens)
        m = max(0, -min(c.num.valuation() for _, c in cs))
        E = R.zero
        for (j, c), d in zip(cs, dens):
            E += lift(c.num, m, j) * L.exquo(d)
        return E, L * R({(m, 0): QQ(1)})

    def from_ring(E, lc=None) -> Poly:
        by_t: dict[int, dict[int, Fraction]] = {}
        for (i, j), c in E.terms():
            by_t.setdefault(j, {})[i] = Fraction(int(c.numerator), int(c.denominator))
        d = LaurentPoly(lc, wvar) if lc is not None else None
        return Poly.from_terms({j: LaurentFraction(LaurentPoly(t, wvar), d) for j, t in by_t.items()}, tvar, zero)

    En, Sn = to_ring(num)
    Ed, Sd = to_ring(den)
    N, D = En * Sd, Ed * Sn
    kept: list[tuple] = []
    for f, m in factors:
        Ef, _ = to_ring(f)
        left = 0
        for _ in range(m):
            g = N.gcd(Ef)
            if g.degree(1) <= 0:
                left += 1
                continue
            N, D = N.exquo(g), D.exquo(g)
            rest = Ef.exquo(g)
            if rest.degree(1) > 0:
                kept.append((rest, 1))
        if left:
            kept.append((Ef, left))
    g = N.gcd(D)
    if g != 1:
        N, D = N.exquo(g), D.exquo(g)
    top = D.degree(1)
    lc = {i: Fraction(int(c.numerator), int(c.denominator)) for (i, j), c in D.terms() if j == top}
    return RationalFunction(from_ring(N, lc), from_ring(D, lc), tuple((from_ring(f), k) for f, k in kept))


def pole_order_at(rf: RationalFunction, root) -> int:
    """Order of the pole of ``rf`` at ``var = root``, clamped below at 0.

    For coefficients in ``QQ(w)`` the root is a monomial ``c*w^k``
    (a :class:`LaurentPoly`), for ``QQ`` a rational number.  The order is
    the multiplicity of ``root`` in the denominator minus that in the
    numerator, so the input need not be canonical.
    """
    if isinstance(root, (int, Fraction, _RationalABC)):
        root = as_fraction(root)
        if not isinstance(rf.den.zero, Fraction):
            root = LaurentPoly.constant(root, rf.den.zero.var)
    if not root:
        raise ValueError("pole_order_at: the point must be nonzero")
    if isinstance(root, LaurentPoly) and not root.is_monomial():
        raise ValueError("pole_order_at: the point must be a monomial c*w^k")
    if isinstance(rf.den.zero, LaurentFraction) and isinstance(root, LaurentPoly):
        root = LaurentFraction(root, None, _canonical=True)
    if not rf.num:
        return 0
    order = root_multiplicity(rf.den, root) - root_multiplicity(rf.num, root)
    return max(order, 0)


def laurent_order_at(rf: RationalFunction, root) -> int:
    """Signed order: ``ord(den) - ord(num)`` (negative means a zero)."""
    if not rf.num:
        raise ValueError("order of the zero function is undefined")
    return root_multiplicity(rf.den, root) - root_multiplicity(rf.num, root)
