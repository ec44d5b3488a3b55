"""FPL counts with a block of nested arches, as polynomials in the block size.

For matchings ``pi1`` (size n1) and ``pi2`` (size n2) the count
``A((pi1)_m pi2)`` is a polynomial in ``m`` whose degree is
``|lambda1| + |lambda2|`` and whose leading coefficient is
``f(lambda1) f(lambda2) / (|lambda1|! |lambda2|!)``, with ``f`` counting
standard Young tableaux.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Sequence

from wheelworks.config import DEFAULT, Config, check_cap
from wheelworks.interp import PolyFit, fit_poly
from wheelworks.matchings import Matching, concat, matching_to_diagram, nest


@dataclass(frozen=True)
class SytCount:
    shape: tuple
    value: int


def _check_partition(shape: Sequence[int]) -> tuple:
    shape = tuple(shape)
    if any(p <= 0 for p in shape) or any(a < b for a, b in zip(shape, shape[1:])):
        raise ValueError(f"{shape} is not a partition")
    return shape


def hook_f(shape: Sequence[int]) -> SytCount:
    """Standard Young tableaux of a shape by the hook-length formula."""
    shape = _check_partition(shape)
    cols = [sum(1 for r in shape if r > c) for c in range(shape[0])] if shape else []
    prod = 1
    for r, row in enumerate(shape):
        for c in range(row):
            prod *= (row - c - 1) + (cols[c] - r - 1) + 1
    return SytCount(shape, factorial(sum(shape)) // prod)


@lru_cache(maxsize=None)
def syt_brute_force(shape: tuple) -> int:
    """Remove a corner holding the largest entry, recursively."""
    shape = _check_partition(shape)
    if sum(shape) <= 1:
        return 1
    total = 0
    for r, row in enumerate(shape):
        if r + 1 == len(shape) or shape[r + 1] < row:
            smaller = list(shape)
            smaller[r] -= 1
            total += syt_brute_force(tuple(p for p in smaller if p))
    return total


def partitions(size: int, max_part: int | None = None):
    max_part = size if max_part is None else max_part
    if size == 0:
        yield ()
        return
    for first in range(min(size, max_part), 0, -1):
        for rest in partitions(size - first, first):
            yield (first,) + rest


def block_matching(pi1: Matching, pi2: Matching, m: int) -> Matching:
    """``(pi1)_m pi2``."""
    return concat(nest(pi1, m), pi2)


def a_value(pi: Matching, config: Config = DEFAULT) -> int:
    from wheelworks.loopmodel import stationary_hamiltonian

    v = stationary_hamiltonian(pi.n, config=config).values[pi]
    if Fraction(v).denominator != 1:
        raise ValueError("stationary vector is not integral")
    return int(v)


def a_sequence(pi1: Matching, pi2: Matching, m_values: Sequence[int],
               config: Config = DEFAULT) -> list[tuple[int, int]]:
    out = []
    for m in m_values:
        N = m + pi1.n + pi2.n
        check_cap("N (a_sequence)", N, config.caps.hamiltonian_n_max)
        out.append((m, a_value(block_matching(pi1, pi2, m), config)))
    return out


def expected_invariants(pi1: Matching, pi2: Matching) -> tuple[int, Fraction]:
    l1, l2 = matching_to_diagram(pi1), matching_to_diagram(pi2)
    s1, s2 = sum(l1), sum(l2)
    lead = Fraction(hook_f(l1).value * hook_f(l2).value, factorial(s1) * factorial(s2))
    return s1 + s2, lead


@dataclass
class ZuberReport:
    pi1: str
    pi2: str
    samples: list
    fit: PolyFit
    expected_degree: int
    expected_leading: Fraction

    @property
    def consistent(self) -> bool:
        return self.fit.consistent

    @property
    def degree_ok(self) -> bool:
        return self.fit.degree == self.expected_degree

    @property
    def leading_ok(self) -> bool:
        return self.fit.leading == self.expected_leading

    @property
    def integral_positive(self) -> bool:
        return all(self.fit(Fraction(m)) == a and a > 0 for m, a in self.samples)

    @property
    def passed(self) -> bool:
        return self.consistent and self.degree_ok and self.leading_ok

    def to_json(self) -> dict:
        return {
            "pi1": self.pi1,
            "pi2": self.pi2,
            "samples": [[m, a] for m, a in self.samples],
            "coefficients": [str(Fraction(c)) for c in self.fit.coefficients],
            "expected_degree": self.expected_degree,
            "observed_degree": self.fit.degree,
            "expected_leading": str(self.expected_leading),
            "observed_leading": str(Fraction(self.fit.leading)),
            "consistency_points": self.fit.consistency_points,
            "pass": {"consistent": self.consistent, "degree": self.degree_ok,
                     "leading": self.leading_ok, "all": self.passed},
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1)


def verify_zuber(pi1: Matching, pi2: Matching, m_max: int, config: Config = DEFAULT) -> ZuberReport:
    """Fit ``m -> A((pi1)_m pi2)`` over ``m = 0..m_max`` using the first ``d + 1`` points."""
    d, lead = expected_invariants(pi1, pi2)
    samples = a_sequence(pi1, pi2, range(m_max + 1), config)
    fit = fit_poly(samples, degree=d)
    return ZuberReport(pi1.word(), pi2.word(), samples, fit, d, lead)
