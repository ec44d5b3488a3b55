"""Run the twelve acceptance checks and write a JSON report."""

import argparse
import json
import sys

from wheelworks.acceptance import LEVELS, run_all
from wheelworks.config import Config


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--level", choices=LEVELS, default="full")
    ap.add_argument("--out", default=None)
    args = ap.parse_args()
    results = run_all(args.level, Config.from_env(), echo=print)
    report = {"level": args.level, "passed": all(r.passed for r in results),
              "criteria": [r.to_json() for r in results]}
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(report, fh, indent=1, default=str)
    return 0 if report["passed"] else 1


if __name__ == "__main__":
    sys.exit(main())
