#!/usr/bin/env python3
"""Regenerate the shipped fixture laws, models, and golden CLI reports.

Run from the repository root after an intentional behavior change:

    python3 scripts/make_fixtures.py

The golden files under fixtures/golden/ are byte-compared by the test
suite, so regenerating them is a deliberate act — review the diff.
"""

import pathlib
import sys

from cmseq.cli import main as cli_main
from cmseq.fixtures import ar1_law, cml_example_law, cyclic_example_law, identity_law
from cmseq.serialize import save_law

ROOT = pathlib.Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"
GOLDEN = FIXTURES / "golden"


def run(argv):
    rc = cli_main(argv)
    if rc != 0:
        sys.exit(f"fixture generation failed: cmseq {' '.join(argv)} -> {rc}")


def main():
    FIXTURES.mkdir(exist_ok=True)
    GOLDEN.mkdir(exist_ok=True)

    laws = {
        "identity": identity_law(3),
        "ar1": ar1_law(2),
        "cyclic": cyclic_example_law(),
        "cml": cml_example_law(),
    }
    for name, law in laws.items():
        save_law(FIXTURES / f"{name}.json", law)

    for name in laws:
        run(
            [
                "classify",
                str(FIXTURES / f"{name}.json"),
                "--out",
                str(GOLDEN / f"classify_{name}.json"),
            ]
        )

    models = {
        "ar1_forward_model": ["convert", str(FIXTURES / "ar1.json"),
                              "--direction", "forward", "--c", "last"],
        "cyclic_backward_model": ["convert", str(FIXTURES / "cyclic.json"),
                                  "--direction", "backward", "--c", "first"],
    }
    for name, argv in models.items():
        run(argv + ["--out", str(FIXTURES / f"{name}.json")])
        run(
            [
                "verify",
                str(FIXTURES / f"{name}.json"),
                "--out",
                str(GOLDEN / f"verify_{name}.json"),
            ]
        )

    print(f"fixtures written under {FIXTURES}")


if __name__ == "__main__":
    main()
