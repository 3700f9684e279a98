"""Consistency checks derived from theorems about weight functions.

The theorems hold for genuine resolution data, so a failed assertion is a
diagnosis of invalid input, not a counterexample.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import frac_str
from .collapse import FOUND, find_collapse, verify_simultaneous
from .complex import (
    DEGENERATION,
    HYPERSURFACE,
    InvalidComplexError,
    StrataComplex,
    essential_skeleton,
    exceptional_subcomplex,
    lct,
    maximal_cells,
    min_weight,
    over_x_subcomplex,
)
from .zeta import (
    candidate_poles,
    leading_coefficient_at,
    naive_zeta_specialized,
    pole_spectrum,
    topological_expression,
    topological_zeta,
)

PASS, FAIL, VACUOUS, UNKNOWN, INFO, REFUSED = "PASS", "FAIL", "VACUOUS", "UNKNOWN", "INFO", "REFUSED"


@dataclass
class Assertion:
    name: str
    status: str
    detail: str = ""
    witnesses: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"name": self.name, "status": self.status, "detail": self.detail}
        if self.witnesses:
            out["witnesses"] = self.witnesses
        return out


@dataclass
class CheckReport:
    checker: str
    assertions: list[Assertion] = field(default_factory=list)
    refused: str = ""

    @property
    def status(self) -> str:
        if self.refused:
            return REFUSED
        seen = {a.status for a in self.assertions}
        for s in (FAIL, UNKNOWN, PASS):
            if s in seen:
                return s
        return VACUOUS

    @property
    def ok(self) -> bool:
        return self.status in (PASS, VACUOUS)

    def add(self, name, status, detail="", **witnesses):
        self.assertions.append(Assertion(name, status, detail, witnesses))

    def to_json(self) -> dict:
        out = {"checker": self.checker, "status": self.status, "assertions": [a.to_json() for a in self.assertions]}
        if self.refused:
            out["refused"] = self.refused
        return out

    def summary_lines(self) -> list[str]:
        lines = [f"{self.checker}: {self.status}" + (f" ({self.refused})" if self.refused else "")]
        for a in self.assertions:
            lines.append(f"  {a.status:8s} {a.name}" + (f": {a.detail}" if a.detail else ""))
        return lines


def _require(c: StrataComplex, mode: str):
    if c.mode != mode:
        raise InvalidComplexError(f"this check needs a complex in {mode} mode, got {c.mode}")


def _constant_weight(c: StrataComplex, cell) -> Fraction | None:
    ws = set(c.cell_weights(cell))
    return ws.pop() if len(ws) == 1 else None


def check_max_face(c: StrataComplex) -> CheckReport:
    """Maximal faces of Sk(Y, x) with constant weight ``w`` have ``w = lct``."""
    _require(c, HYPERSURFACE)
    rep = CheckReport("max-face")
    t = lct(c)
    for cell in maximal_cells(over_x_subcomplex(c)):
        w = _constant_weight(c, cell)
        if w is None:
            continue
        status = PASS if w == t else FAIL
        detail = f"constant weight {frac_str(w)}" + ("" if w == t else f", lct is {frac_str(t)}; input data is inconsistent")
        rep.add(f"maximal face {cell.id}", status, detail, cell=cell.id, weight=frac_str(w), lct=frac_str(t))
    return rep


def check_veys(c: StrataComplex) -> CheckReport:
    """Order-``n`` poles sit at ``-lct``; the expected pole has order ``m``.

    Orders of the naive zeta function are taken after the Poincare
    specialization and reported as "specialized".
    """
    _require(c, HYPERSURFACE)
    rep = CheckReport("veys")
    n = c.ambient_dimension
    t = lct(c)
    s_lct = -t
    cands = candidate_poles(c)
    top = topological_zeta(c)
    top_poles = pole_spectrum(top, cands, topological_expression(c), bound=n)
    naive = naive_zeta_specialized(c)
    naive_poles = pole_spectrum(naive, cands, bound=n)
    m = max((len(cell.vertices) for cell in c.cells if c.is_over_x(cell) and all(w == t for w in c.cell_weights(cell))), default=0)
    if not 1 <= m <= n:
        rep.add("1 <= m <= n", FAIL, f"m = {m}, n = {n}", m=m, n=n)

    for label, spec in (("topological", top_poles), ("naive (specialized)", naive_poles)):
        above = [p for p in spec if p.order and p.candidate > s_lct]
        rep.add(
            f"(a) {label}: no pole larger than -lct",
            FAIL if above else PASS,
            f"poles {', '.join(frac_str(p.candidate) for p in above)} exceed {frac_str(s_lct)}" if above else "",
            lct=frac_str(t),
        )
        top_order = [p for p in spec if p.order == n]
        if not top_order:
            rep.add(f"(b) {label}: order-{n} poles sit at -lct with m = n", VACUOUS, f"no pole of order {n}")
            rep.add(f"(d) {label}: order-{n} pole is -1/N", VACUOUS, f"no pole of order {n}")
            continue
        bad = [p for p in top_order if p.candidate != s_lct or m != n]
        rep.add(
            f"(b) {label}: order-{n} poles sit at -lct with m = n",
            FAIL if bad else PASS,
            f"order-{n} pole at {', '.join(frac_str(p.candidate) for p in top_order)}, m = {m}",
            poles=[frac_str(p.candidate) for p in top_order],
            m=m,
        )
        rep.add(
            f"(d) {label}: order-{n} pole is -1/N",
            PASS if t.numerator == 1 else FAIL,
            f"-lct = {frac_str(s_lct)}",
        )

    order = naive.order_at(s_lct)
    rep.add(
        "(c) naive (specialized): pole of order m at -lct",
        PASS if order == m else FAIL,
        f"specialized order {order}, m = {m}",
        order=order,
        m=m,
    )
    if m == n:
        top_at = next((p.order for p in top_poles if p.candidate == s_lct), 0)
        if top_at != n:
            rep.add("(e) topological: pole of order n at -lct with positive residue", FAIL, f"order {top_at}, expected {n}")
        else:
            res = leading_coefficient_at(top, s_lct, n)
            rep.add(
                "(e) topological: pole of order n at -lct with positive residue",
                PASS if res > 0 else FAIL,
                f"leading coefficient {frac_str(res)}",
                residue=frac_str(res),
            )
    else:
        rep.add("(e) topological: pole of order n at -lct with positive residue", VACUOUS, f"m = {m} < n = {n}")
    return rep


def check_cy(c: StrataComplex) -> CheckReport:
    """Maximal constant-weight cells have minimal weight and lie in the
    essential skeleton."""
    _require(c, DEGENERATION)
    rep = CheckReport("cy")
    w0 = min_weight(c)
    ess = essential_skeleton(c).cell_ids()
    for cell in maximal_cells(c):
        w = _constant_weight(c, cell)
        if w is None:
            continue
        ok = w == w0 and cell.id in ess
        detail = f"constant weight {frac_str(w)}"
        if not ok:
            detail += f", minimal weight is {frac_str(w0)}; input data is inconsistent"
        rep.add(f"maximal face {cell.id}", PASS if ok else FAIL, detail, cell=cell.id, weight=frac_str(w))
    return rep


def _reduced_problems(c: StrataComplex) -> list[str]:
    return [
        f"{v.id} has N = {v.N}"
        for v in c.vertices
        if not v.exceptional and v.meets_x and v.N != 1
    ]


def check_level_collapse(c: StrataComplex, budget: int | None = None) -> CheckReport:
    """Search a collapse onto the essential skeleton that is simultaneous
    for all weight levels at or above the minimal value."""
    rep = CheckReport("level-collapse")
    target = essential_skeleton(c)
    if c.mode == DEGENERATION:
        source = c
        w0 = min_weight(c)
    else:
        problems = _reduced_problems(c)
        if problems:
            rep.refused = "divisor is not reduced at x: " + ", ".join(problems)
            return rep
        w0 = lct(c)
        sk = over_x_subcomplex(c)
        source = sk if w0 == 1 else exceptional_subcomplex(c, over_x=True)
    thresholds = sorted({v.weight for v in source.vertices if v.weight >= w0} | {w0})
    src_ids, tgt_ids = source.cell_ids(), target.cell_ids()
    label = "log canonical" if c.mode == HYPERSURFACE and w0 == 1 else ("not log canonical" if c.mode == HYPERSURFACE else "degeneration")
    if not tgt_ids <= src_ids:
        rep.add(
            f"collapse onto the essential skeleton ({label})",
            FAIL,
            "essential skeleton is not contained in the source complex; input data is inconsistent",
            missing=sorted(tgt_ids - src_ids),
        )
        return rep
    result = find_collapse(c, src_ids, tgt_ids, budget, thresholds)
    if result.status == FOUND:
        steps = [s.to_json() for s in result.sequence.steps]
        rep.add(
            f"collapse onto the essential skeleton ({label})",
            PASS,
            f"{len(steps)} elementary collapses",
            steps=steps,
        )
        for lv in verify_simultaneous(c, result.sequence, thresholds):
            rep.add(f"level w <= {frac_str(lv.threshold)}", PASS if lv.passed else FAIL, lv.reason)
    else:
        status = UNKNOWN if result.status == "unknown" else FAIL
        rep.add(
            f"collapse onto the essential skeleton ({label})",
            status,
            f"{result.status}: {result.reason}; input data is inconsistent" if status == FAIL else f"{result.status}: {result.reason}",
        )
    if c.mode == HYPERSURFACE and w0 < 1:
        full = find_collapse(c, over_x_subcomplex(c).cell_ids(), tgt_ids, budget)
        if full.status == FOUND:
            detail = "the full Sk(Y, x) also collapses onto the essential skeleton"
        else:
            detail = (
                f"the full Sk(Y, x) does not collapse onto the essential skeleton ({full.status}: {full.reason}); "
                "expected outside the log canonical case"
            )
        rep.add("full skeleton (not log canonical)", INFO, detail, outcome=full.status)
    return rep


def check_all(c: StrataComplex, budget: int | None = None) -> list[CheckReport]:
    if c.mode == HYPERSURFACE:
        return [check_max_face(c), check_veys(c), check_level_collapse(c, budget)]
    return [check_cy(c), check_level_collapse(c, budget)]
