"""Reading and writing ``strata-complex/1`` documents and reports."""

from __future__ import annotations

import json
import re
from functools import lru_cache
from importlib import resources

import jsonschema

from .algebra import LaurentPoly
from .complex import Divisor, InvalidComplexError, StrataComplex, Stratum, validate

FORMAT = "strata-complex/1"
FIXTURES = ("smooth", "monomial", "cusp", "nodal-line", "f3", "f4", "f5", "x2y2", "degeneration")


@lru_cache(maxsize=1)
def schema() -> dict:
    text = resources.files("zetask").joinpath("schema/strata-complex-1.json").read_text()
    return json.loads(text)


def _pointer(path) -> str:
    return "".join(f"/{p}" for p in path)


def _locate(doc: dict, message: str) -> str:
    """Best JSON pointer for a semantic violation message."""
    m = re.match(r"(vertex|cell) (.+?): (.*)", message)
    if not m:
        if "mode" in message:
            return "/mode"
        if "ambient_dimension" in message:
            return "/ambient_dimension"
        return ""
    kind, ident, rest = m.groups()
    key = "vertices" if kind == "vertex" else "cells"
    items = doc.get(key, [])
    hits = [i for i, item in enumerate(items) if item.get("id") == ident]
    index = hits[-1] if hits else 0
    base = f"/{key}/{index}"
    if kind == "vertex":
        for field in ("N", "nu"):
            if rest.startswith(f"{field} "):
                return f"{base}/{field}"
        return base if "duplicate" not in rest else f"{base}/id"
    if "face" in rest:
        return f"{base}/faces"
    if "chi_over_x" in rest:
        return f"{base}/chi_over_x"
    if "duplicate" in rest:
        return f"{base}/id"
    if "vertex" in rest or "dimension" in rest:
        return f"{base}/vertices"
    return base


def _laurent(data, var: str) -> LaurentPoly | None:
    return None if data is None else LaurentPoly.from_triples(data, var)


def complex_from_dict(doc) -> StrataComplex:
    """Validate a decoded document and build the complex."""
    if isinstance(doc, dict) and "format" in doc and doc["format"] != FORMAT:
        raise InvalidComplexError(
            f"unsupported format version {doc['format']!r} (expected {FORMAT!r})",
            [f"/format: unsupported version {doc['format']!r}"],
        )
    validator = jsonschema.Draft202012Validator(schema())
    errors = sorted(validator.iter_errors(doc), key=lambda e: (list(map(str, e.absolute_path)), e.message))
    if errors:
        problems = [f"{_pointer(e.absolute_path) or '/'}: {e.message}" for e in errors]
        raise InvalidComplexError("schema violations: " + "; ".join(problems), problems)
    vertices = tuple(
        Divisor(
            id=v["id"],
            N=v["N"],
            nu=v["nu"],
            label=v.get("label", ""),
            exceptional=v.get("exceptional", False),
            meets_x=v.get("meets_x", True),
            class_poly=_laurent(v.get("class_poly"), "L"),
        )
        for v in doc["vertices"]
    )
    cells = tuple(
        Stratum(
            id=c["id"],
            vertices=tuple(c["vertices"]),
            faces=tuple(c.get("faces", ())),
            chi_over_x=c.get("chi_over_x"),
            over_x=c.get("over_x"),
            class_over_x=_laurent(c.get("class_over_x"), "L"),
            poincare_over_x=_laurent(c.get("poincare_over_x"), "u"),
        )
        for c in doc["cells"]
    )
    cx = StrataComplex(doc["mode"], doc["ambient_dimension"], vertices, cells, name=doc.get("name", ""))
    messages = validate(cx)
    if messages:
        problems = [f"{_locate(doc, msg) or '/'}: {msg}" for msg in messages]
        raise InvalidComplexError("invalid strata complex: " + "; ".join(problems), problems)
    return cx


def parse_complex(document: bytes | str) -> StrataComplex:
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as exc:
        raise InvalidComplexError(f"not valid JSON: {exc}", [f"/: {exc}"]) from None
    return complex_from_dict(doc)


def complex_to_dict(c: StrataComplex) -> dict:
    out: dict = {"format": FORMAT}
    if c.name:
        out["name"] = c.name
    out["mode"] = c.mode
    out["ambient_dimension"] = c.ambient_dimension
    vertices = []
    for v in c.vertices:
        item = {
            "id": v.id,
            "label": v.label,
            "N": v.N,
            "nu": v.nu,
            "exceptional": v.exceptional,
            "meets_x": v.meets_x,
        }
        if v.class_poly is not None:
            item["class_poly"] = v.class_poly.to_triples()
        vertices.append(item)
    cells = []
    for cell in c.cells:
        item = {"id": cell.id, "vertices": list(cell.vertices), "faces": list(cell.faces)}
        if cell.chi_over_x is not None:
            item["chi_over_x"] = cell.chi_over_x
        if cell.over_x is not None:
            item["over_x"] = cell.over_x
        if cell.class_over_x is not None:
            item["class_over_x"] = cell.class_over_x.to_triples()
        if cell.poincare_over_x is not None:
            item["poincare_over_x"] = cell.poincare_over_x.to_triples()
        cells.append(item)
    out["vertices"] = vertices
    out["cells"] = cells
    return out


def dumps(obj) -> str:
    """Deterministic JSON text: fixed indentation, ASCII, trailing newline."""
    return json.dumps(obj, indent=2, ensure_ascii=True) + "\n"


def emit_complex(c: StrataComplex) -> str:
    return dumps(complex_to_dict(c))


def emit_report(results: dict) -> tuple[str, str]:
    """``(json document, human summary)`` for a mapping of results.

    Values must already be JSON-ready (rationals as "a/b" strings).
    """
    if not results:
        return "{}\n", "nothing to report"
    lines = []
    for key, value in results.items():
        if isinstance(value, (str, int)):
            lines.append(f"{key}: {value}")
        elif isinstance(value, list) and all(isinstance(v, str) for v in value):
            lines.append(f"{key}: {', '.join(value)}")
        else:
            lines.append(f"{key}:")
            lines.extend("  " + row for row in _summary_rows(value))
    return dumps(results), "\n".join(lines)


def _summary_rows(value) -> list[str]:
    if isinstance(value, dict):
        if "checker" in value:
            rows = [f"{value['status']}"]
            rows += [f"{a['status']:8s} {a['name']}" + (f": {a['detail']}" if a.get("detail") else "") for a in value["assertions"]]
            return rows
        return [f"{k}: {v if not isinstance(v, (dict, list)) else json.dumps(v)}" for k, v in value.items()]
    if isinstance(value, list):
        return [json.dumps(v) if not isinstance(v, str) else v for v in value]
    return [str(value)]


def fixture_names() -> tuple[str, ...]:
    return FIXTURES


def fixture_text(name: str) -> str:
    if name not in FIXTURES:
        raise InvalidComplexError(f"unknown fixture {name!r}; available: {', '.join(FIXTURES)}")
    return resources.files("zetask").joinpath(f"fixtures/{name}.json").read_text()


def load_fixture(name: str) -> StrataComplex:
    return parse_complex(fixture_text(name))


def load_complex(path: str) -> StrataComplex:
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise InvalidComplexError(f"cannot read {path}: {exc.strerror}") from None
    return parse_complex(data)
