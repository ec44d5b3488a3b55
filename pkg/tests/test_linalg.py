import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import sparse

from wheelworks.errors import VerificationError
from wheelworks.linalg import SingularMatrixError, particular_solution, rank, solve, solve_many
from wheelworks.modsolve import (
    SingularModularSystem, rational_reconstruction, small_primes, solve_dense_mod_p,
    solve_dense_modular, solve_float_refined, solve_modular,
)


def random_system(rng, n, spread=9):
    while True:
        a = [[rng.randint(-spread, spread) for _ in range(n)] for _ in range(n)]
        if rank([[Fraction(v) for v in row] for row in a]) == n:
            return a, [rng.randint(-spread, spread) for _ in range(n)]


def test_exact_solve_examples():
    a = [[Fraction(2), Fraction(1)], [Fraction(1), Fraction(3)]]
    assert solve(a, [Fraction(3), Fraction(5)]) == [Fraction(4, 5), Fraction(7, 5)]
    assert rank([[1, 2], [2, 4]]) == 1
    with pytest.raises(SingularMatrixError):
        solve([[Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)]], [Fraction(1), Fraction(1)])


def test_particular_solution_of_dependent_columns():
    cols = [[Fraction(1), Fraction(0)], [Fraction(2), Fraction(0)]]
    x = particular_solution(cols, [Fraction(4), Fraction(0)])
    assert x is not None and x[0] + 2 * x[1] == 4
    assert particular_solution(cols, [Fraction(0), Fraction(1)]) is None


@given(st.integers(0, 10**6), st.integers(1, 7))
def test_all_routes_agree(seed, n):
    rng = random.Random(seed)
    a, b = random_system(rng, n)
    exact = solve([[Fraction(v) for v in row] for row in a], [Fraction(v) for v in b])
    rows = [{c: v for c, v in enumerate(row) if v} for row in a]
    assert solve_modular(rows, b, n) == exact
    assert solve_dense_modular(np.array(a), np.array(b)) == exact
    assert solve_many([[Fraction(v) for v in row] for row in a], [[Fraction(v) for v in b]]) == [exact]


def test_dense_modular_needs_and_finds_more_primes():
    rng = random.Random(3)
    a, b = random_system(rng, 30, spread=50)
    exact = solve([[Fraction(v) for v in row] for row in a], [Fraction(v) for v in b])
    assert solve_dense_modular(np.array(a), np.array(b)) == exact
    with pytest.raises(VerificationError):
        solve_dense_modular(np.array(a), np.array(b), max_primes=2)


def test_dense_mod_p_large_entries_do_not_overflow():
    p = next(small_primes())
    rng = np.random.default_rng(0)
    a = rng.integers(0, p, (200, 200))
    b = rng.integers(0, p, 200)
    x = solve_dense_mod_p(a, b, p)
    lhs = [sum(int(a[i, j]) * int(x[j]) for j in range(200)) % p for i in range(200)]
    assert lhs == [int(v) for v in b]


def test_singular_modular_systems():
    with pytest.raises(SingularModularSystem):
        solve_dense_mod_p(np.array([[1, 2], [2, 4]]), np.array([1, 2]), 101)
    with pytest.raises(SingularModularSystem):
        solve_modular([{0: 1, 1: 2}, {0: 2, 1: 4}], [1, 2], 2)


def test_small_primes_are_prime_and_fit():
    ps = [p for _, p in zip(range(5), small_primes())]
    assert ps[0] == 2**31 - 1
    assert all(p < 2**31 for p in ps) and ps == sorted(ps, reverse=True)
    assert all(all(p % d for d in range(2, 1000)) for p in ps)


@given(st.integers(-1000, 1000), st.integers(1, 1000))
def test_rational_reconstruction(num, den):
    m = 2**61 - 1
    x = Fraction(num, den)
    assert rational_reconstruction(x.numerator * pow(x.denominator, -1, m) % m, m) == x


def test_float_route_with_exact_refinement():
    a = [[4, -1, 0], [-1, 4, -1], [0, -1, 4]]
    b = [3, 2, 3]
    rows = [{c: v for c, v in enumerate(r) if v} for r in a]
    x = solve_float_refined(sparse.csr_matrix(np.array(a, dtype=float)), np.array(b), rows)
    assert x == [1, 1, 1]
    assert solve_float_refined(sparse.csr_matrix(np.array([[3.0]])), np.array([1]), [{0: 3}]) is None
