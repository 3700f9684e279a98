"""Regenerate the bundled fixture files from their builders."""

from __future__ import annotations

import pathlib

from zetask.catalog import build_fixture
from zetask.io import FIXTURES, emit_complex

OUT = pathlib.Path(__file__).resolve().parents[1] / "src" / "zetask" / "fixtures"


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    for name in FIXTURES:
        (OUT / f"{name}.json").write_text(emit_complex(build_fixture(name)))
        print(f"wrote {name}.json")


if __name__ == "__main__":
    main()
