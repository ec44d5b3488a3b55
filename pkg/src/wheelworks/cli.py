"""Command-line entry point.

Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
3 capacity exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from wheelworks.config import Config
from wheelworks.errors import (
    CapacityError, ConventionError, DomainError, MatchingParseError, VerificationError,
)
from wheelworks.matchings import parse_matching

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_CAPACITY = 0, 1, 2, 3


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


def _emit(args, payload: dict, rows: list[dict] | None = None) -> None:
    if args.format == "csv" and rows is not None:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        text = buf.getvalue()
    elif args.format == "pretty":
        text = json.dumps(payload, indent=2) + "\n"
    else:
        text = json.dumps(payload) + "\n"
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_fpl_count(args, config: Config) -> int:
    from wheelworks.config import check_cap
    from wheelworks.fpl import cached_count_table

    check_cap("n (fpl)", args.n, config.caps.fpl_n_max)
    table = cached_count_table(args.n, config, args.numbering)
    payload = table.to_json()
    _emit(args, payload, payload["counts"])
    return EXIT_OK


def cmd_wheel_psi(args, config: Config) -> int:
    from wheelworks.poly import GENERIC, OMEGA
    from wheelworks.wheel import psi

    pi = parse_matching(args.matching)
    domain = OMEGA if args.q == "omega" else GENERIC
    p = psi(pi, domain, config)
    if args.eval_at_one:
        payload = {"matching": pi.word(), "domain": domain.name, "value": str(p.eval_at_one())}
    elif args.format == "pretty":
        sys.stdout.write(p.poly.dump() + "\n")
        return EXIT_OK
    else:
        payload = {"matching": pi.word(), "domain": domain.name, "polynomial": p.poly.to_json()}
    _emit(args, payload)
    return EXIT_OK


def cmd_loop_stationary(args, config: Config) -> int:
    from wheelworks.loopmodel import stationary_hamiltonian, stationary_markov

    if args.method == "markov":
        vec = stationary_markov(args.n, args.p, config)
    else:
        vec = stationary_hamiltonian(args.n, args.solver, config)
    payload = vec.to_json()
    _emit(args, payload, payload["counts"])
    return EXIT_OK


def cmd_zuber_verify(args, config: Config) -> int:
    from wheelworks.zuber import expected_invariants, verify_zuber

    pi1, pi2 = parse_matching(args.pi1), parse_matching(args.pi2)
    if args.mmax is None:
        d, _ = expected_invariants(pi1, pi2)
        m_max = max(min(6, 10 - pi1.n - pi2.n), d + 2)
    else:
        m_max = args.mmax
    report = verify_zuber(pi1, pi2, m_max, config)
    _emit(args, report.to_json())
    return EXIT_OK if report.passed else EXIT_VERIFY


def cmd_selftest(args, config: Config) -> int:
    from wheelworks.acceptance import run_all

    results = run_all(args.level, config, echo=lambda line: print(line, file=sys.stderr))
    payload = {"level": args.level, "passed": all(r.passed for r in results),
               "criteria": [r.to_json() for r in results]}
    _emit(args, payload)
    return EXIT_OK if payload["passed"] else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wheelworks", description="FPL counts, wheel polynomials and loop-model oracles.")
    parser.add_argument("--format", choices=("json", "csv", "pretty"), default="json")
    parser.add_argument("--cache-dir", default=None, help="overrides WHEELWORKS_CACHE")
    parser.add_argument("--threads", type=int, default=None, help="overrides WHEELWORKS_THREADS")
    sub = parser.add_subparsers(dest="group", required=True)

    fpl = sub.add_parser("fpl").add_subparsers(dest="action", required=True)
    p = fpl.add_parser("count", help="FPL counts by link pattern")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--numbering", choices=("ccw", "cw"), default="ccw")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_fpl_count)

    wheel = sub.add_parser("wheel").add_subparsers(dest="action", required=True)
    p = wheel.add_parser("psi", help="basis polynomial of a matching")
    p.add_argument("--matching", required=True)
    p.add_argument("--q", choices=("generic", "omega"), default="generic")
    p.add_argument("--eval-at-one", action="store_true")
    p.set_defaults(func=cmd_wheel_psi)

    loop = sub.add_parser("loop").add_subparsers(dest="action", required=True)
    p = loop.add_parser("stationary", help="stationary vector of the loop model")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--method", choices=("hamiltonian", "markov"), default="hamiltonian")
    p.add_argument("--p", type=_rational, default=Fraction(1, 2))
    p.add_argument("--solver", choices=("auto", "sparse", "float"), default="auto")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_loop_stationary)

    zuber = sub.add_parser("zuber").add_subparsers(dest="action", required=True)
    p = zuber.add_parser("verify", help="polynomiality in m of a block family")
    p.add_argument("--pi1", required=True)
    p.add_argument("--pi2", required=True)
    p.add_argument("--mmax", type=int, default=None)
    p.set_defaults(func=cmd_zuber_verify)

    p = sub.add_parser("selftest", help="run the acceptance checks")
    p.add_argument("--level", choices=("smoke", "full"), default="smoke")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    config = Config.from_env(cache_dir=args.cache_dir, threads=args.threads)
    try:
        return args.func(args, config)
    except CapacityError as exc:
        print(f"capacity: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (VerificationError, ConventionError) as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (MatchingParseError, DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
