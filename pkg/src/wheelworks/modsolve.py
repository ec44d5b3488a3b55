"""Exact solution of integer linear systems.

Three routes, checked against each other in the tests:

* :func:`solve_modular`: sparse elimination modulo several primes near
  ``2**62``, Chinese remaindering and rational reconstruction.
* :func:`solve_dense_modular`: the same with dense numpy elimination modulo
  primes below ``2**31`` (residue products fit in int64).
* :func:`solve_float_refined`: a SuperLU floating-point solve rounded to
  rationals with a bounded denominator, refined with exact integer residuals.

Each returns a candidate only after the exact residual ``A x == b`` holds
over the rationals.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt
from typing import Sequence

import numpy as np

from wheelworks.errors import VerificationError

# primes just below 2**62
PRIMES = (
    4611686018427387847, 4611686018427387817, 4611686018427387787,
    4611686018427387733, 4611686018427387709, 4611686018427387631,
)

SparseRows = Sequence[dict]   # row i: {column: integer coefficient}


class SingularModularSystem(ArithmeticError):
    pass


def _solve_mod_p(rows: SparseRows, rhs: Sequence[int], ncols: int, p: int) -> list[int]:
    """Sparse Gaussian elimination mod ``p``; pivot rows chosen shortest first."""
    work = []
    for r, b in zip(rows, rhs):
        d = {c: v % p for c, v in r.items() if v % p}
        work.append([d, b % p])
    col_rows: dict[int, set[int]] = {}
    for i, (d, _) in enumerate(work):
        for c in d:
            col_rows.setdefault(c, set()).add(i)
    alive = set(range(len(work)))
    pivots: list[tuple[int, dict, int]] = []
    # bucket rows by length for a cheap shortest-row choice
    while alive:
        i = min(alive, key=lambda k: len(work[k][0]) or ncols + 1)
        d, b = work[i]
        alive.discard(i)
        if not d:
            if b:
                raise SingularModularSystem("inconsistent system")
            continue
        # pivot on the column touching the fewest live rows
        c = min(d, key=lambda k: len(col_rows.get(k, ())))
        inv = pow(d[c], -1, p)
        d = {k: v * inv % p for k, v in d.items()}
        b = b * inv % p
        for k in d:
            col_rows[k].discard(i)
        pivots.append((c, d, b))
        for j in list(col_rows.get(c, ())):
            if j not in alive:
                continue
            dj, bj = work[j]
            f = dj[c]
            for k, v in d.items():
                nv = (dj.get(k, 0) - f * v) % p
                if nv:
                    if k not in dj:
                        col_rows.setdefault(k, set()).add(j)
                    dj[k] = nv
                elif k in dj:
                    del dj[k]
                    col_rows[k].discard(j)
            work[j][1] = (bj - f * b) % p
    if len(pivots) < ncols:
        raise SingularModularSystem(f"rank {len(pivots)} < {ncols}")
    x = [0] * ncols
    for c, d, b in reversed(pivots):
        s = b
        for k, v in d.items():
            if k != c:
                s -= v * x[k]
        x[c] = s % p
    return x


def rational_reconstruction(a: int, m: int) -> Fraction | None:
    """``r/s`` with ``|r|, s <= sqrt(m/2)`` and ``r = a s (mod m)``, if any."""
    bound = isqrt(m // 2)
    r0, r1 = m, a % m
    s0, s1 = 0, 1
    while r1 > bound:
        qt = r0 // r1
        r0, r1 = r1, r0 - qt * r1
        s0, s1 = s1, s0 - qt * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    return Fraction(r1, s1)


def _crt(residues: list[list[int]], primes: Sequence[int]) -> tuple[list[int], int]:
    m = 1
    acc = [0] * len(residues[0])
    for res, p in zip(residues, primes):
        inv = pow(m % p, -1, p)
        acc = [a + m * (((r - a) * inv) % p) for a, r in zip(acc, res)]
        m *= p
    return acc, m


def residual_is_zero(rows: SparseRows, rhs: Sequence, x: Sequence) -> bool:
    return all(sum(v * x[c] for c, v in r.items()) == b for r, b in zip(rows, rhs))


def solve_modular(rows: SparseRows, rhs: Sequence[int], ncols: int, prime_count: int = 2,
                  max_primes: int = len(PRIMES)) -> list[Fraction]:
    """Unique rational solution of a square sparse integer system, verified exactly."""
    used, residues = [], []
    for p in PRIMES[:max_primes]:
        residues.append(_solve_mod_p(rows, rhs, ncols, p))
        used.append(p)
        if len(used) < prime_count:
            continue
        acc, m = _crt(residues, used)
        cand = [rational_reconstruction(a, m) for a in acc]
        if any(c is None for c in cand):
            continue
        if residual_is_zero(rows, rhs, cand):
            return cand
    raise VerificationError("rational reconstruction failed with all available primes")


def solve_float_refined(matrix, rhs: np.ndarray, rows: SparseRows, max_den: int = 1,
                        rounds: int = 4) -> list[Fraction] | None:
    """Floating-point candidate, rounded to denominators ``<= max_den`` and refined exactly.

    ``matrix`` is a scipy sparse matrix equal to ``rows``.  Returns ``None`` when no
    exact solution emerges; the caller then falls back to :func:`solve_modular`.
    """
    from scipy.sparse.linalg import splu

    lu = splu(matrix.tocsc())
    exact_rhs = [Fraction(int(v)) for v in rhs]
    x = [Fraction(0)] * len(exact_rhs)
    resid = list(exact_rhs)
    for _ in range(rounds):
        step = lu.solve(np.array([float(r) for r in resid]))
        x = [xi + Fraction(float(s)).limit_denominator(max_den) for xi, s in zip(x, step)]
        resid = [b - sum(v * x[c] for c, v in r.items()) for r, b in zip(rows, exact_rhs)]
        if not any(resid):
            return x
    return None


def _is_prime(n: int) -> bool:
    if n < 2 or n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def small_primes():
    """Primes below ``2**31`` in decreasing order, so residue products fit in int64."""
    n = 2**31 - 1
    while n > 2**30:
        if _is_prime(n):
            yield n
        n -= 2


def solve_dense_mod_p(matrix: np.ndarray, rhs: np.ndarray, p: int) -> np.ndarray:
    """Gaussian elimination mod ``p < 2**31`` on a dense square int64 system."""
    a = np.mod(np.array(matrix, dtype=np.int64), p)
    b = np.mod(np.array(rhs, dtype=np.int64), p)
    n = a.shape[0]
    for k in range(n):
        nz = np.nonzero(a[k:, k])[0]
        if nz.size == 0:
            raise SingularModularSystem(f"singular at column {k}")
        r = k + int(nz[0])
        if r != k:
            a[[k, r]] = a[[r, k]]
            b[[k, r]] = b[[r, k]]
        inv = pow(int(a[k, k]), -1, p)
        a[k, k:] = a[k, k:] * inv % p
        b[k] = b[k] * inv % p
        f = a[k + 1:, k].copy()
        rows = np.nonzero(f)[0]
        if rows.size:
            idx = rows + k + 1
            a[idx, k:] = (a[idx, k:] - f[rows, None] * a[k, k:]) % p
            b[idx] = (b[idx] - f[rows] * b[k]) % p
    # unit upper triangular now; column-oriented back substitution keeps every product below p**2
    x = np.zeros(n, dtype=np.int64)
    for k in range(n - 1, -1, -1):
        x[k] = b[k]
        if k:
            b[:k] = (b[:k] - a[:k, k] * x[k]) % p
    return x


def solve_dense_modular(matrix: np.ndarray, rhs: np.ndarray, prime_count: int = 2,
                        max_primes: int = 64) -> list[Fraction]:
    """Rational solution of a dense integer system via several primes, CRT and reconstruction.

    Primes are added until the reconstructed candidate satisfies the system exactly.
    """
    used, residues = [], []
    ints = [[int(v) for v in row] for row in np.asarray(matrix)]
    rows = [{c: v for c, v in enumerate(row) if v} for row in ints]
    b = [int(v) for v in rhs]
    for p in small_primes():
        if len(used) >= max_primes:
            break
        residues.append([int(v) for v in solve_dense_mod_p(matrix, rhs, p)])
        used.append(p)
        if len(used) < prime_count:
            continue
        acc, m = _crt(residues, used)
        cand = [rational_reconstruction(a, m) for a in acc]
        if any(c is None for c in cand):
            continue
        if residual_is_zero(rows, b, cand):
            return cand
    raise VerificationError("rational reconstruction failed with all available primes")
