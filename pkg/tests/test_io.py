from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

import pytest
from shapes import vertex

from zetask import cli
from zetask.catalog import build_fixture
from zetask.complex import HYPERSURFACE, InvalidComplexError, build_complex
from zetask.io import (
    FIXTURES,
    complex_from_dict,
    complex_to_dict,
    emit_complex,
    emit_report,
    fixture_text,
    load_fixture,
    parse_complex,
)

GOLDEN = Path(__file__).parent / "golden"


def doc(name="cusp"):
    return json.loads(fixture_text(name))


# -- documents --------------------------------------------------------------


@pytest.mark.parametrize("name", FIXTURES)
def test_round_trip(name):
    text = fixture_text(name)
    assert emit_complex(parse_complex(text)) == text
    assert emit_complex(parse_complex(text.encode())) == text


@pytest.mark.parametrize("name", FIXTURES)
def test_bundled_files_match_their_builders(name):
    assert emit_complex(build_fixture(name)) == fixture_text(name)


def test_cusp_fixture_has_four_vertices():
    assert len(load_fixture("cusp").vertices) == 4


def violations(d):
    with pytest.raises(InvalidComplexError) as err:
        complex_from_dict(d)
    return err.value.violations


def test_zero_multiplicity_points_at_the_field():
    d = doc()
    d["vertices"][0]["N"] = 0
    assert any(v.startswith("/vertices/0/N:") for v in violations(d))


def test_wrong_version():
    d = doc()
    d["format"] = "strata-complex/2"
    with pytest.raises(InvalidComplexError, match="unsupported format version 'strata-complex/2'"):
        complex_from_dict(d)


def test_duplicate_ids():
    d = doc()
    d["vertices"].append(dict(d["vertices"][1]))
    assert "/vertices/4/id: vertex E1: duplicate id" in violations(d)


def test_non_integer_nu_and_unknown_keys():
    d = doc()
    d["vertices"][2]["nu"] = 1.5
    d["extra"] = True
    found = violations(d)
    assert any(v.startswith("/vertices/2/nu:") for v in found)
    assert any(v.startswith("/:") and "extra" in v for v in found)


def test_semantic_violation_pointer():
    d = doc()
    d["cells"][4]["vertices"] = ["C1", "E9"]
    assert "/cells/4/vertices: cell C1.E3: unknown vertex E9" in violations(d)


def test_not_json():
    with pytest.raises(InvalidComplexError, match="not valid JSON"):
        parse_complex(b"{nope")


def test_dict_form_keeps_optional_fields():
    d = complex_to_dict(load_fixture("f4"))
    assert d["format"] == "strata-complex/1"
    assert any("poincare_over_x" in c for c in d["cells"])


def test_emit_report():
    assert emit_report({}) == ("{}\n", "nothing to report")
    text, summary = emit_report({"lct": "5/6", "cells": ["E3"]})
    assert json.loads(text) == {"lct": "5/6", "cells": ["E3"]}
    assert summary == "lct: 5/6\ncells: E3"


# -- command line -----------------------------------------------------------


def run(args, capsys):
    code = cli.main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cli_lct(capsys):
    assert run(["lct", "--fixture", "cusp"], capsys) == (0, "5/6\n", "")


def test_cli_veys_prints_the_pole(capsys):
    code, out, _ = run(["check", "--veys", "--fixture", "f3"], capsys)
    assert code == 0
    assert "veys: PASS" in out
    assert "pole order 3 at s = -1" in out


def test_cli_refusal_exit_codes(capsys):
    code, out, _ = run(["check", "--collapse", "--fixture", "monomial"], capsys)
    assert code == 1 and "REFUSED" in out
    code, out, _ = run(["check", "--all", "--fixture", "monomial"], capsys)
    assert code == 0 and "REFUSED" in out


def test_cli_fail_exit_code(tmp_path, capsys):
    vs = [vertex("a"), vertex("b", 2, 1), vertex("c")]
    cells = [dict(id=v, vertices=(v,), chi_over_x=1) for v in "abc"]
    cells += [dict(id="ac", vertices=("a", "c"), chi_over_x=1), dict(id="bc", vertices=("b", "c"), chi_over_x=1)]
    path = tmp_path / "bad.json"
    path.write_text(emit_complex(build_complex(HYPERSURFACE, 2, vs, cells)))
    code, out, _ = run(["check", "--max-face", str(path)], capsys)
    assert code == 2 and "FAIL" in out


def test_cli_data_errors(tmp_path, capsys):
    d = doc()
    d["vertices"][0]["N"] = 0
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(d))
    code, _, err = run(["lct", str(path)], capsys)
    assert code == 1 and "/vertices/0/N" in err
    code, _, err = run(["lct", str(tmp_path / "missing.json")], capsys)
    assert code == 1 and "cannot read" in err
    code, _, err = run(["resolve-curve", "--poly", "x^2 + y^2"], capsys)
    assert (code, err) == (1, "error: requires algebraic point support: t^2 + 1\n")
    code, _, err = run(["resolve-curve", "--poly", "x/y"], capsys)
    assert code == 1


def test_cli_internal_error(monkeypatch, capsys):
    def boom(*_):
        raise ZeroDivisionError("boom")

    monkeypatch.setattr(cli, "minimal_value", boom)
    code, _, err = run(["lct", "--fixture", "cusp"], capsys)
    assert code == 3 and "internal error" in err


def test_cli_budget_precedence(monkeypatch, capsys):
    monkeypatch.setenv("ZETASK_BUDGET", "1")
    code, out, _ = run(["collapse", "--fixture", "cusp", "--format", "json"], capsys)
    assert json.loads(out)["status"] == "unknown"
    code, out, _ = run(["collapse", "--fixture", "cusp", "--format", "json", "--budget", "100"], capsys)
    assert json.loads(out)["status"] == "found"
    monkeypatch.setenv("ZETASK_BUDGET", "zero")
    code, _, err = run(["collapse", "--fixture", "cusp"], capsys)
    assert code == 1 and "ZETASK_BUDGET" in err


def test_cli_resolve_and_emit(tmp_path, capsys):
    out_path = tmp_path / "cusp.json"
    code, out, _ = run(["resolve-curve", "--poly", "x^2+y^3", "--emit", str(out_path), "--tree"], capsys)
    assert code == 0
    assert "E3: N = 6, nu = 5, weight 5/6" in out
    c = parse_complex(out_path.read_bytes())
    assert [v.id for v in c.vertices] == ["C1", "E1", "E2", "E3"]
    code, out, _ = run(["zeta", "top", str(out_path)], capsys)
    assert out == "(4*s + 5)/((s + 1)*(6*s + 5))\n"


def test_cli_skeleton_levels(capsys):
    code, out, _ = run(["skeleton", "--level", "5/6", "--fixture", "cusp"], capsys)
    assert out == "level <= 5/6: E3; Euler characteristic 1\n"
    code, _, err = run(["skeleton", "--level", "abc", "--fixture", "cusp"], capsys)
    assert code == 1


def test_cusp_report_matches_golden(capsys):
    code, out, _ = run(["report", "--all", "--fixture", "cusp", "--format", "json"], capsys)
    assert code == 0
    assert out == (GOLDEN / "cusp-report.json").read_text()


def test_cli_json_is_deterministic_across_processes():
    cmd = [sys.executable, "-m", "zetask.cli", "report", "--fixture", "nodal-line", "--format", "json"]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, check=True, env={"PYTHONHASHSEED": "123", "PATH": ""}).stdout
    assert first == second


def test_cli_usage_errors_are_data_errors(capsys):
    code, _, err = run(["zeta", "bogus"], capsys)
    assert code == 1 and "invalid choice" in err
    code, out, _ = run(["zeta", "naive", "--fixture", "smooth"], capsys)
    assert code == 0 and out.startswith("(1 - w^(-4))*T/(1 - w^(-4)*T) ; ")
