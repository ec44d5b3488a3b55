"""The twelve acceptance checks, shared by the test suite and ``wheelworks selftest``.

Each check returns a :class:`CriterionResult`.  At level ``full`` every
check runs at its stated scope and its runtime budget is part of the
verdict; ``smoke`` shrinks the sizes so the whole set finishes in well
under a minute.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from wheelworks.config import DEFAULT, Config

LEVELS = ("smoke", "full")


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    seconds: float
    budget: float | None
    detail: dict = field(default_factory=dict)

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        budget = f" (budget {self.budget:.0f}s)" if self.budget else ""
        return f"[{verdict}] criterion {self.number:2d} {self.name}: {self.seconds:.1f}s{budget}"

    def to_json(self) -> dict:
        return {"number": self.number, "name": self.name, "pass": self.passed,
                "seconds": round(self.seconds, 3), "budget": self.budget, "detail": self.detail}


def _run(number: int, name: str, budget: float | None, level: str, body: Callable[[], dict]) -> CriterionResult:
    start = time.perf_counter()
    detail = body()
    seconds = time.perf_counter() - start
    ok = bool(detail.pop("ok"))
    if level == "full" and budget is not None and seconds > budget:
        detail["over_budget"] = True
        ok = False
    return CriterionResult(number, name, ok, seconds, budget, detail)


def fpl_totals(level: str = "full", config: Config = DEFAULT) -> CriterionResult:
    from wheelworks.fpl import asm, count_by_pattern

    def body():
        expected = [1, 2, 7, 42, 429]
        top = 5 if level == "full" else 4
        totals = [count_by_pattern(n, config).total for n in range(1, top + 1)]
        product = [asm(n) for n in range(1, top + 1)]
        return {"ok": totals == product == expected[:top], "totals": totals}

    return _run(1, "FPL totals equal ASM(n)", 10, level, body)


def wheel_fpl_bridge(level: str = "full", config: Config = DEFAULT) -> CriterionResult:
    from wheelworks.fpl import count_by_pattern
    from wheelworks.poly import OMEGA
    from wheelworks.wheel import psi_table

    def body():
        bad = []
        for n in range(1, (4 if level == "full" else 3) + 1):
            counts = count_by_pattern(n, config).counts
            table = psi_table(n, OMEGA, config)
            bad += [pi.word() for pi in counts if table[pi].eval_at_one() != counts[pi]]
        return {"ok": not bad, "mismatches": bad}

    return _run(2, "Psi at z=1 (q=omega) equals FPL counts", 300, level, body)


def wheel_condition(level: str = "full", config: Config = DEFAULT) -> CriterionResult:
    from wheelworks.matchings import all_matchings
    from wheelworks.poly import GENERIC
    from wheelworks.wheel import d_table, psi_table, wheel_check

    def body():
        bad = []
        for n in range(1, (4 if level == "full" else 3) + 1):
            for table in (psi_table(n, GENERIC, config), d_table(n, GENERIC, config)):
                bad += [f"{table.kind}{pi.word()}" for pi in all_matchings(n) if not wheel_check(table[pi])]
        return {"ok": not bad, "failures": bad}

    return _run(3, "wheel condition for Psi and D", 300, level, body)


def basis_change(level: str = "full", config: Config = DEFAULT) -> CriterionResult:
    from wheelworks.wheel import ev_matrix_rank_at, triangularity_report

    def body():
        top = 4 if level == "full" else 3
        rng = random.Random(20240601)
        tri, ranks = {}, {}
        for n in range(1, top + 1):
            rep = triangularity_report(n)
            tri[n] = rep["supported_below"] and rep["unit_diagonal"]
            qs = [Fraction(rng.randint(2, 97), rng.randint(1, 31)) for _ in range(3)]
            ranks[n] = [(str(q), *ev_matrix_rank_at(n, q)) for q in qs]
        ok = all(tri.values()) and all(r == s for rows in ranks.values() for _, r, s in rows)
        return {"ok": ok, "unitriangular": tri, "ev_rank": ranks}

    return _run(4, "Psi->D unitriangular, ev matrix nonsingular", None, level, body)


def rotation_identity(level: str = "full", config: Config = DEFAULT) -> CriterionResult:
    from wheelworks.poly import GENERIC, OMEGA
    from wheelworks.wheel import rotation_identity_check

    def body():
        generic = {n: rotation_identity_check(n, GENERIC) for n in (1, 2, 3)}
        omega = {4: rotation_identity_check(4, OMEGA)} if level == "full" else {}
        return {"ok": all(generic.values()) and all(omega.values()), "generic": generic, "omega": omega}

    return _run(5, "rotation against cyclic variable shift", None, level, body)


def local_exchange(level: str = "full", config: Config = DEFAULT) -> CriterionResult:
    from wheelworks.poly import GENERIC
    from wheelworks.wheel import local_qkz_residuals

    def body():
        bad = [(n, i, pi.word()) for n in (1, 2, 3)
               for i, pi, ok in local_qkz_residuals(n, GENERIC) if not ok]
        return {"ok": not bad, "failures": bad}

    return _run(6, "local exchange identity, generic q", None, level, body)


def operator_identities(level: str = "full", config: Config = DEFAULT) -> CriterionResult:
    from wheelworks.poly import operator_identity_check, random_poly
    from wheelworks.wheel import base_eigen_check

    def body():
        rng = random.Random(36)
        trials = 100 if level == "full" else 20
        bad = []
        for t in range(trials):
            n = rng.randint(1, 3)
            m = 2 * n
            f = random_poly(m, rng)
            for i in range(1, m):
                if not operator_identity_check("idempotent", f, i):
                    bad.append((t, "idempotent", i))
                if i + 1 < m and not operator_identity_check("braid", f, i):
                    bad.append((t, "braid", i))
                bad += [(t, "commute", i, j) for j in range(i + 2, m)
                        if not operator_identity_check("commute", f, i, j)]
        base = {n: base_eigen_check(n) for n in (1, 2, 3)}
        return {"ok": not bad and all(base.values()), "failures": bad, "base_eigen": base}

    return _run(7, "operator identities of D_i", None, level, body)


def loop_model_oracle(level: str = "full", config: Config = DEFAULT) -> CriterionResult:
    from wheelworks.fpl import asm, count_by_pattern
    from wheelworks.loopmodel import calibrate_orientation, hamiltonian_fixed_point
    from wheelworks.matchings import all_matchings, fully_nested, rotate

    def body():
        orientation = calibrate_orientation(3, config)
        small, large, timing = {}, {}, {}
        for n in range(1, (5 if level == "full" else 4) + 1):
            vec = hamiltonian_fixed_point(n, orientation, config=config)
            small[n] = vec.values == count_by_pattern(n, config).counts
        for n in range(6, (9 if level == "full" else 7) + 1):
            start = time.perf_counter()
            vec = hamiltonian_fixed_point(n, orientation, config=config)
            timing[n] = round(time.perf_counter() - start, 2)
            vals = vec.values
            large[n] = (
                all(Fraction(v).denominator == 1 and v > 0 for v in vals.values())
                and all(vals[rotate(pi)] == vals[pi] for pi in all_matchings(n))
                and vals[fully_nested(n)] == 1
                and sum(vals.values()) == asm(n)
            )
        ok = all(small.values()) and all(large.values()) and timing.get(9, 0) < 600
        return {"ok": ok, "orientation": orientation, "matches_fpl": small, "properties": large,
                "solve_seconds": timing}

    return _run(8, "Hamiltonian fixed point equals FPL counts", None, level, body)


def markov_chain(level: str = "full", config: Config = DEFAULT) -> CriterionResult:
    from wheelworks.fpl import asm, count_by_pattern
    from wheelworks.loopmodel import stationary_markov

    def body():
        res = {}
        for n in range(1, (4 if level == "full" else 3) + 1):
            vecs = [stationary_markov(n, Fraction(a, b), config).values for a, b in ((1, 3), (1, 2), (2, 3))]
            counts = count_by_pattern(n, config).counts
            target = {pi: Fraction(c, asm(n)) for pi, c in counts.items()}
            res[n] = vecs[0] == vecs[1] == vecs[2] == target
        return {"ok": all(res.values()), "per_n": res}

    return _run(9, "Markov stationary law is p-independent and equals A/ASM", None, level, body)


def pform_engine(level: str = "full", config: Config = DEFAULT) -> CriterionResult:
    from itertools import product

    from wheelworks.pform import PForm, dk_pform, example_closed_form

    def body():
        top = 4 if level == "full" else 2
        closed = all(
            dk_pform(1, PForm.make(1, {(1, 2): a12, (2, 1): a21}, [b1, b2], [c1, c2])).coefficient_sum()
            == example_closed_form(a12, a21, [b1, b2], [c1, c2])
            for a12, a21, b1, b2, c1, c2 in product(range(top), repeat=6)
        )
        rng = random.Random(42)
        bad = 0
        for _ in range(100 if level == "full" else 20):
            n = rng.randint(1, 2)
            m = 2 * n
            alpha = {(i, j): rng.randint(0, 3) for i in range(1, m + 1) for j in range(1, m + 1)
                     if i != j and rng.random() < 0.3}
            beta = [rng.randint(0, 3) * (rng.random() < 0.4) for _ in range(m)]
            gamma = [rng.randint(0, 3) * (rng.random() < 0.4) for _ in range(m)]
            P = PForm.make(n, alpha, beta, gamma)
            k = rng.randint(1, m)
            if dk_pform(k, P).to_poly() != P.to_poly().dk(k):
                bad += 1
        return {"ok": closed and bad == 0, "closed_form": closed, "oracle_mismatches": bad}

    return _run(10, "P-form engine: closed form and polynomial oracle", None, level, body)


def degree_bound(level: str = "full", config: Config = DEFAULT) -> CriterionResult:
    from wheelworks.pform import AffineExponentPattern, poly_in_m

    def body():
        rng = random.Random(43)
        fails = []
        for t in range(50 if level == "full" else 10):
            n = rng.randint(1, 2)
            pattern = AffineExponentPattern.random(n, rng)
            ops = [rng.randint(1, 2 * n) for _ in range(rng.randint(0, 3))]
            fit = poly_in_m(ops, pattern, range(9))
            if not (fit.consistent and fit.degree <= len(ops) and fit.consistency_points >= 2):
                fails.append(t)
        return {"ok": not fails, "failures": fails}

    return _run(11, "values at z=1 are polynomial in m of bounded degree", None, level, body)


def zuber_pairs(max_n: int = 3) -> list[tuple]:
    """Pairs with ``n1, n2 <= max_n`` and at most three boxes, with their sampling range.

    The nominal range is ``m = 0..10 - n1 - n2``; where that leaves fewer than two
    consistency witnesses it is extended to ``d + 2``.
    """
    from wheelworks.matchings import all_matchings
    from wheelworks.zuber import expected_invariants

    out = []
    for n1 in range(1, max_n + 1):
        for n2 in range(1, max_n + 1):
            for a in all_matchings(n1):
                for b in all_matchings(n2):
                    d, _ = expected_invariants(a, b)
                    if d <= 3:
                        out.append((a, b, max(10 - n1 - n2, d + 2)))
    return out


def zuber_matrix(level: str = "full", config: Config = DEFAULT) -> CriterionResult:
    from wheelworks.zuber import verify_zuber

    def body():
        pairs = zuber_pairs(3 if level == "full" else 2)
        failures = []
        for a, b, m_max in pairs:
            rep = verify_zuber(a, b, m_max, config)
            if not (rep.passed and rep.fit.consistency_points >= 2 and rep.integral_positive):
                failures.append(rep.to_json())
        return {"ok": not failures, "pairs": len(pairs), "failures": failures}

    return _run(12, "block counts are polynomials in m with the predicted degree and leading term",
                1800, level, body)


CRITERIA = (
    fpl_totals, wheel_fpl_bridge, wheel_condition, basis_change, rotation_identity, local_exchange,
    operator_identities, loop_model_oracle, markov_chain, pform_engine, degree_bound, zuber_matrix,
)


def run_all(level: str = "full", config: Config = DEFAULT, echo: Callable[[str], None] | None = None
            ) -> list[CriterionResult]:
    if level not in LEVELS:
        raise ValueError(f"level must be one of {LEVELS}")
    results = []
    for check in CRITERIA:
        res = check(level, config)
        if echo is not None:
            echo(res.line())
        results.append(res)
    return results
