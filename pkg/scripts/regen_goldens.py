"""Rewrite tests/golden/*.{csv,json} from tests/golden/cases.json.

Run after an intentional output change, then review the diff.
"""

import argparse
import contextlib
import io
import json
import sys
from pathlib import Path

from gradedlab.cli import main

GOLDEN = Path(__file__).resolve().parent.parent / "tests" / "golden"


def golden_path(case):
    ext = "csv" if "csv" in case["argv"] else "json"
    return GOLDEN / f"{case['name']}.{ext}"


def run(argv):
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = main(list(argv))
    return code, buf.getvalue()


def regenerate(only=None):
    cases = json.loads((GOLDEN / "cases.json").read_text())
    for case in cases:
        if only and case["name"] not in only:
            continue
        code, out = run(case["argv"])
        if code != case["exit"]:
            sys.exit(f"{case['name']}: exit {code}, expected {case['exit']}")
        golden_path(case).write_text(out, newline="")
        print(f"wrote {golden_path(case).name}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("names", nargs="*", help="only these cases")
    regenerate(set(ap.parse_args().names))
