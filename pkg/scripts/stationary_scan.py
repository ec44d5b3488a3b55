"""Solve the Hamiltonian fixed point for a range of sizes and compare solver routes."""

import argparse
import time

from wheelworks.config import Config
from wheelworks.fpl import asm
from wheelworks.loopmodel import dihedral_orbits, hamiltonian_fixed_point
from wheelworks.matchings import catalan


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-max", type=int, default=10)
    ap.add_argument("--compare-up-to", type=int, default=7,
                    help="also run the sparse and float routes up to this size")
    args = ap.parse_args()
    config = Config.from_env()
    print(" n   C_n  orbits  seconds  sum=ASM  max component")
    for n in range(1, args.n_max + 1):
        start = time.perf_counter()
        vec = hamiltonian_fixed_point(n, "transpose", "dihedral", config)
        secs = time.perf_counter() - start
        vals = vec.values
        line = (f"{n:2d} {catalan(n):6d} {len(dihedral_orbits(n)[0]):6d} {secs:8.2f}  "
                f"{sum(vals.values()) == asm(n)!s:7}  {max(vals.values())}")
        if n <= args.compare_up_to:
            same = all(hamiltonian_fixed_point(n, "transpose", m, config).values == vals
                       for m in ("sparse", "float"))
            line += f"  routes agree: {same}"
        print(line, flush=True)


if __name__ == "__main__":
    main()
