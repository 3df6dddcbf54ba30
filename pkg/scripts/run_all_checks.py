#!/usr/bin/env python3
"""Run every CLI check at its default truncation and summarise the exit codes."""

import argparse
import io
import json
import sys
import time

from ising_svoa.cli import run

SUITES = [
    ["dims"],
    ["virasoro-check", "--sector", "both"],
    ["jacobi-check", "--variant", "ns", "--samples", "200"],
    ["jacobi-check", "--variant", "twisted", "--samples", "200"],
    ["zhu"],
    ["zhu-twisted"],
    ["fusion"],
    ["twisted-action"],
    ["form-check"],
    ["conformal", "--test", "axioms"],
    ["conformal", "--test", "rational"],
    ["conformal", "--test", "decompose"],
    ["conformal", "--test", "commutant"],
]


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--cache-dir", help="operator cache directory")
    parser.add_argument("--json", action="store_true", help="dump every report")
    args = parser.parse_args()
    extra = ["--cache-dir", args.cache_dir] if args.cache_dir else []

    worst = 0
    for argv in SUITES:
        out = io.StringIO()
        start = time.perf_counter()
        code = run(argv + extra, stdout=out)
        worst = max(worst, code)
        print(f"{code}  {time.perf_counter() - start:6.1f}s  {' '.join(argv)}")
        if args.json:
            print(json.dumps(json.loads(out.getvalue()), indent=2))
    return worst


if __name__ == "__main__":
    sys.exit(main())
