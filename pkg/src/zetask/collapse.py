"""Elementary collapses of regular cell complexes, searched exactly.

A pair ``(sigma, tau)`` is free in ``K`` when ``sigma`` is a proper face of
``tau`` and of no other cell of ``K``; removing both is an elementary
collapse.  Searches are depth-first with memoized states and a node budget,
so the answer is ``found``, ``none`` (search space exhausted) or
``unknown`` (budget exhausted).
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .complex import InvalidComplexError, StrataComplex

DEFAULT_BUDGET = 10**6
FOUND, NONE, UNKNOWN = "found", "none", "unknown"


def default_budget() -> int:
    raw = os.environ.get("ZETASK_BUDGET")
    if raw is None:
        return DEFAULT_BUDGET
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"ZETASK_BUDGET must be an integer, got {raw!r}") from None
    if value < 1:
        raise ValueError("ZETASK_BUDGET must be positive")
    return value


class CollapseError(ValueError):
    pass


@dataclass(frozen=True)
class CollapseStep:
    face: str
    coface: str

    def to_json(self) -> list[str]:
        return [self.face, self.coface]


@dataclass(frozen=True)
class CollapseSequence:
    steps: tuple[CollapseStep, ...]
    source: frozenset[str]
    target: frozenset[str]

    def __len__(self):
        return len(self.steps)


@dataclass(frozen=True)
class CollapseResult:
    status: str
    sequence: CollapseSequence | None = None
    nodes: int = 0
    reason: str = ""


@dataclass(frozen=True)
class LevelCheck:
    threshold: Fraction
    passed: bool
    reason: str = ""


@dataclass
class _Geometry:
    """Up-closure of the face poset, shared by all states of one search."""

    complex: StrataComplex
    above: dict[str, frozenset[str]] = field(init=False)
    dims: dict[str, int] = field(init=False)

    def __post_init__(self):
        up: dict[str, set[str]] = {c.id: set() for c in self.complex.cells}
        for cid, faces in self.complex.proper_faces.items():
            for f in faces:
                up[f].add(cid)
        self.above = {k: frozenset(v) for k, v in up.items()}
        self.dims = {c.id: c.dim for c in self.complex.cells}


def _cells(c: StrataComplex, ids: Iterable[str] | StrataComplex | None) -> frozenset[str]:
    if ids is None:
        return c.cell_ids()
    if isinstance(ids, StrataComplex):
        ids = ids.cell_ids()
    out = frozenset(ids)
    unknown = out - c.cell_ids()
    if unknown:
        raise InvalidComplexError(f"unknown cells: {sorted(unknown)}")
    return out


def _check_closed(c: StrataComplex, cells: frozenset[str], what: str):
    for cid in cells:
        missing = c.proper_faces[cid] - cells
        if missing:
            raise CollapseError(f"{what} is not a subcomplex: {cid} lacks faces {sorted(missing)}")


def free_pairs(c: StrataComplex, cells: Iterable[str] | None = None, _geo: _Geometry | None = None) -> list[CollapseStep]:
    """All free pairs of the subcomplex ``cells`` (default: all of ``c``)."""
    geo = _geo or _Geometry(c)
    K = _cells(c, cells)
    out = []
    for sigma in sorted(K):
        above = geo.above[sigma] & K
        if len(above) == 1:
            (tau,) = above
            out.append(CollapseStep(sigma, tau))
    return out


def apply(c: StrataComplex, cells: Iterable[str], step: CollapseStep, _geo: _Geometry | None = None) -> frozenset[str]:
    """Perform one elementary collapse; raises when the pair is not free."""
    geo = _geo or _Geometry(c)
    K = frozenset(cells)
    sigma, tau = step.face, step.coface
    if sigma not in K or tau not in K:
        raise CollapseError(f"step ({sigma}, {tau}): cell not present")
    if sigma not in c.proper_faces[tau]:
        raise CollapseError(f"step ({sigma}, {tau}): {sigma} is not a face of {tau}")
    blocking = sorted((geo.above[sigma] & K) - {tau})
    if blocking:
        raise CollapseError(f"step ({sigma}, {tau}): {sigma} is not free, blocked by {', '.join(blocking)}")
    return K - {sigma, tau}


def _euler(geo: _Geometry, cells: frozenset[str]) -> int:
    return sum((-1) ** geo.dims[k] for k in cells)


def _separated(c: StrataComplex, step: CollapseStep, thresholds) -> bool:
    a, b = c.max_weight(step.face), c.max_weight(step.coface)
    return any((a <= t) != (b <= t) for t in thresholds)


def find_collapse(
    c: StrataComplex,
    source=None,
    target=None,
    budget: int | None = None,
    thresholds: Iterable | None = None,
) -> CollapseResult:
    """Search for a collapse of ``source`` onto ``target``.

    With ``thresholds`` only steps whose two cells lie on the same side of
    every threshold are allowed, so the sequence restricts to a collapse of
    each weight level simultaneously.  Steps are tried in order of
    decreasing maximal vertex weight of the removed top cell, then by id.
    """
    budget = default_budget() if budget is None else budget
    src = _cells(c, source)
    tgt = _cells(c, target) if target is not None else frozenset()
    if not tgt <= src:
        raise CollapseError("target is not contained in source")
    _check_closed(c, src, "source")
    _check_closed(c, tgt, "target")
    geo = _Geometry(c)
    ths = sorted({Fraction(t) for t in thresholds}) if thresholds is not None else None

    if _euler(geo, src) != _euler(geo, tgt):
        return CollapseResult(NONE, None, 0, "Euler characteristics differ")

    def moves(K: frozenset[str]) -> list[CollapseStep]:
        out = []
        for step in free_pairs(c, K, geo):
            if step.face in tgt or step.coface in tgt:
                continue
            if ths is not None and _separated(c, step, ths):
                continue
            out.append(step)
        out.sort(key=lambda s: (-c.max_weight(s.coface), s.coface, s.face))
        return out

    seen: set[frozenset[str]] = set()
    nodes = 0
    stack: list[tuple[frozenset[str], list[CollapseStep], int]] = [(src, moves(src), 0)]
    path: list[CollapseStep] = []
    seen.add(src)
    while stack:
        K, options, i = stack[-1]
        if K == tgt:
            return CollapseResult(FOUND, CollapseSequence(tuple(path), src, tgt), nodes)
        if i >= len(options):
            stack.pop()
            if path:
                path.pop()
            continue
        stack[-1] = (K, options, i + 1)
        step = options[i]
        nxt = K - {step.face, step.coface}
        if nxt in seen:
            continue
        nodes += 1
        if nodes > budget:
            return CollapseResult(UNKNOWN, None, nodes - 1, f"budget of {budget} nodes exhausted")
        seen.add(nxt)
        path.append(step)
        stack.append((nxt, moves(nxt), 0))
    return CollapseResult(NONE, None, nodes, "search space exhausted")


def verify_simultaneous(c: StrataComplex, sequence: CollapseSequence, thresholds: Iterable) -> list[LevelCheck]:
    """Replay ``sequence`` on every level ``{max weight <= t}``."""
    geo = _Geometry(c)
    out = []
    for t in sorted({Fraction(x) for x in thresholds}):
        level = frozenset(k for k in sequence.source if c.max_weight(k) <= t)
        goal = frozenset(k for k in sequence.target if c.max_weight(k) <= t)
        K = level
        reason = ""
        for step in sequence.steps:
            inside = (step.face in K, step.coface in K)
            if inside == (False, False):
                continue
            if inside != (True, True):
                reason = f"step ({step.face}, {step.coface}) crosses level {t}"
                break
            try:
                K = apply(c, K, step, geo)
            except CollapseError as exc:
                reason = str(exc)
                break
        if not reason and K != goal:
            reason = f"level {t} ends with {len(K)} cells, expected {len(goal)}"
        out.append(LevelCheck(t, not reason, reason))
    return out


def find_simultaneous_collapse(c: StrataComplex, source, target, thresholds, budget: int | None = None):
    """Search and verify in one go; returns ``(result, level checks)``."""
    result = find_collapse(c, source, target, budget, thresholds)
    checks = verify_simultaneous(c, result.sequence, thresholds) if result.sequence else []
    return result, checks
