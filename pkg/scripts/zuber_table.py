"""Fit A((pi1)_m pi2) in m for every small pair and tabulate the polynomials."""

import argparse
import json
import time

from wheelworks.acceptance import zuber_pairs
from wheelworks.config import Config
from wheelworks.zuber import verify_zuber


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=3, help="largest n1 and n2")
    ap.add_argument("--out", default=None, help="write all reports as JSON")
    args = ap.parse_args()
    config = Config.from_env()
    reports = []
    start = time.perf_counter()
    for a, b, m_max in zuber_pairs(args.max_n):
        rep = verify_zuber(a, b, m_max, config)
        reports.append(rep.to_json())
        coeffs = " ".join(str(c) for c in rep.to_json()["coefficients"])
        flag = "ok " if rep.passed else "BAD"
        print(f"{flag} {a.word():>8} | {b.word():<8} m<={m_max:2d} deg {rep.fit.degree} "
              f"lead {rep.to_json()['observed_leading']:>5}  coeffs [{coeffs}]")
    print(f"{sum(r['pass']['all'] for r in reports)}/{len(reports)} pairs pass "
          f"in {time.perf_counter() - start:.1f}s")
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(reports, fh, indent=1)


if __name__ == "__main__":
    main()
