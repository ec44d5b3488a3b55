"""Show which reading of each convention-dependent identity holds.

Each line prints a candidate reading and whether it holds, so the choices
recorded in the package can be re-derived from scratch.
"""

from wheelworks.fpl import count_by_pattern
from wheelworks.loopmodel import ORIENTATIONS, hamiltonian_fixed_point
from wheelworks.matchings import all_matchings
from wheelworks.poly import GENERIC, OMEGA
from wheelworks.wheel import local_qkz_check, rotation_identity_check, split_basis_check


def main() -> None:
    for n in (2, 3):
        for dom in (GENERIC, OMEGA):
            for reading in ("calibrated", "literal"):
                print(f"rotation n={n} {dom.name:7} {reading:10} {rotation_identity_check(n, dom, reading)}")
    for n in (2, 3):
        for reading in ("weighted", "literal"):
            print(f"local exchange n={n} {reading:8} {local_qkz_check(n, GENERIC, reading)}")
    cases = [(a, b) for n1 in (1, 2, 3) for n2 in range(1, 5 - n1)
             for a in all_matchings(n1) for b in all_matchings(n2)]
    for shift in (1, -1):
        ok = sum(split_basis_check(a, b, shift)["holds"] for a, b in cases)
        print(f"split basis, rotation by {shift:+d}*n2: {ok}/{len(cases)} hold")
    counts = count_by_pattern(3).counts
    for o in ORIENTATIONS:
        print(f"orientation {o:10} reproduces FPL counts at n=3: "
              f"{hamiltonian_fixed_point(3, o).values == counts}")
    for n in (3, 4, 5):
        same = count_by_pattern(n, numbering="ccw").counts == count_by_pattern(n, numbering="cw").counts
        print(f"numberings ccw and cw give equal counts at n={n}: {same}")


if __name__ == "__main__":
    main()
