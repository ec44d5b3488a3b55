"""The O(1) loop model on a cylinder: Hamiltonian fixed point and Markov chain.

Matrices are indexed by matchings in canonical order.  ``hamiltonian(n,
"precompose")[pi, sigma]`` counts the ``j`` with ``e_j(pi) = sigma``, so it
acts on a vector by ``(H v)_pi = sum_j v_{e_j(pi)}``; the ``transpose``
orientation moves basis vectors, ``|pi> -> sum_j |e_j pi>``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np
from scipy import sparse
from scipy.sparse.csgraph import connected_components

from wheelworks.config import DEFAULT, Config, check_cap
from wheelworks.errors import ConventionError, VerificationError
from wheelworks.linalg import solve
from wheelworks.matchings import (
    Matching, _from_partner_unchecked, all_matchings, fully_nested, matching_index,
    parse_matching, reflect, rotate, tl_apply,
)
from wheelworks.modsolve import solve_dense_modular, solve_float_refined, solve_modular

ORIENTATIONS = ("precompose", "transpose")
CACHE_VERSION = 1


@dataclass
class StationaryVector:
    n: int
    values: dict
    normalization: str          # "nested=1" or "sum=1"
    source: str                 # "hamiltonian", "markov" or "fpl"
    meta: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "source": self.source,
            "normalization": self.normalization,
            "counts": [{"pattern": pi.word(), "count": _fmt(self.values[pi])} for pi in all_matchings(self.n)],
            **({"meta": self.meta} if self.meta else {}),
        }

    @classmethod
    def from_json(cls, data: dict) -> "StationaryVector":
        vals = {parse_matching(r["pattern"]): _parse(r["count"]) for r in data["counts"]}
        return cls(data["n"], vals, data["normalization"], data["source"], data.get("meta", {}))


def _fmt(x):
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _parse(v):
    return Fraction(v) if isinstance(v, str) else v


# --- Temperley-Lieb matrices -------------------------------------------------


def tl_matrix(n: int, j: int, tau=1) -> list[list]:
    """Dense matrix of ``e_j`` moving basis vectors, with weight ``tau`` on arches closed at ``j, j+1``."""
    idx = matching_index(n)
    size = len(idx)
    mat = [[0] * size for _ in range(size)]
    for pi, c in idx.items():
        img = tl_apply(j, pi)
        mat[idx[img]][c] += tau if img == pi else 1
    return mat


def _matmul(a, b):
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def tl_relations_check(n: int, tau=1) -> bool:
    """``e_j^2 = tau e_j`` and ``e_j e_{j+-1} e_j = e_j`` (cyclically) as matrices."""
    m = 2 * n
    mats = {j: tl_matrix(n, j, tau) for j in range(1, m + 1)}
    for j in range(1, m + 1):
        e = mats[j]
        if _matmul(e, e) != [[tau * x for x in row] for row in e]:
            return False
        if n >= 2:
            for k in (j % m + 1, (j - 2) % m + 1):
                if _matmul(_matmul(e, mats[k]), e) != e:
                    return False
    return True


def hamiltonian(n: int, orientation: str = "transpose", config: Config = DEFAULT) -> sparse.csr_matrix:
    """Integer sparse matrix of ``sum_j e_j`` in the given orientation."""
    if orientation not in ORIENTATIONS:
        raise ValueError(f"orientation must be one of {ORIENTATIONS}")
    check_cap("n (hamiltonian)", n, config.caps.hamiltonian_n_max)
    mats = all_matchings(n)
    idx = matching_index(n)
    size = len(mats)
    rows, cols = [], []
    m = 2 * n
    for a, pi in enumerate(mats):
        p = pi.partner
        for j in range(1, m + 1):
            rows.append(a)
            cols.append(idx[_tl_fast(p, j, m)])
    data = np.ones(len(rows), dtype=np.int64)
    mat = sparse.csr_matrix((data, (rows, cols)), shape=(size, size), dtype=np.int64)
    mat.sum_duplicates()
    return mat if orientation == "precompose" else mat.T.tocsr()


def _tl_fast(p: tuple, j: int, m: int) -> Matching:
    a, b = j, j % m + 1
    pa, pb = p[a - 1], p[b - 1]
    if pa == b:
        return _from_partner_unchecked(p)
    q = list(p)
    q[a - 1], q[b - 1] = b, a
    q[pa - 1], q[pb - 1] = pb, pa
    return _from_partner_unchecked(q)


def perron_certificate(mat: sparse.spmatrix, eigenvalue: int) -> dict:
    """Nonnegative, strongly connected and constant column sums ``eigenvalue``.

    Then ``eigenvalue`` is the Perron root (all-ones is a positive left
    eigenvector) and it is simple, so the fixed-point space is one-dimensional.
    """
    ok_sign = bool((mat.data >= 0).all())
    ncomp, _ = connected_components(mat, directed=True, connection="strong")
    colsums = np.asarray(mat.sum(axis=0)).ravel()
    return {
        "nonnegative": ok_sign,
        "strongly_connected": ncomp == 1,
        "column_sums_constant": bool((colsums == eigenvalue).all()),
        "kernel_dimension_one": ok_sign and ncomp == 1 and bool((colsums == eigenvalue).all()),
    }


def _fixed_point_system(mat: sparse.csr_matrix, eigenvalue: int, pin: int):
    """Rows of ``mat - eigenvalue I`` with row ``pin`` replaced by ``x_pin = 1``.

    The rows of ``mat - eigenvalue I`` sum to zero (constant column sums), so
    dropping any one of them loses nothing when the kernel is one-dimensional.
    """
    size = mat.shape[0]
    a = (mat - eigenvalue * sparse.identity(size, dtype=np.int64, format="csr")).tolil()
    a.rows[pin] = [pin]
    a.data[pin] = [1]
    a = a.tocsr()
    a.eliminate_zeros()
    rhs = np.zeros(size, dtype=np.int64)
    rhs[pin] = 1
    rows = []
    for i in range(size):
        lo, hi = a.indptr[i], a.indptr[i + 1]
        rows.append({int(c): int(v) for c, v in zip(a.indices[lo:hi], a.data[lo:hi])})
    return a, rhs, rows


def dihedral_orbits(n: int) -> tuple[list[int], np.ndarray]:
    """Orbits of rotation and reflection on matchings of size ``n``.

    Returns the representative index of each orbit (the smallest member) and
    the orbit label of every matching.
    """
    mats = all_matchings(n)
    idx = matching_index(n)
    label = np.full(len(mats), -1, dtype=np.int64)
    reps: list[int] = []
    for a, pi in enumerate(mats):
        if label[a] >= 0:
            continue
        k = len(reps)
        reps.append(a)
        for base in (pi, reflect(pi)):
            for t in range(max(2 * n, 1)):
                label[idx[rotate(base, t)]] = k
    return reps, label


def _quotient(mat: sparse.csr_matrix, reps: list[int], label: np.ndarray) -> np.ndarray:
    """``Q[a, b] = sum over pi in orbit b of mat[rep_a, pi]``.

    Both orientations commute with rotation and reflection, so an orbit-constant
    vector ``w`` lifts to ``mat v = lambda v`` exactly when ``Q w = lambda w``.
    """
    q = np.zeros((len(reps), len(reps)), dtype=np.int64)
    for a, r in enumerate(reps):
        lo, hi = mat.indptr[r], mat.indptr[r + 1]
        np.add.at(q[a], label[mat.indices[lo:hi]], mat.data[lo:hi])
    return q


def _dihedral_fixed_point(mat: sparse.csr_matrix, n: int, eigenvalue: int, pin: int) -> list[Fraction]:
    reps, label = dihedral_orbits(n)
    q = _quotient(mat, reps, label) - eigenvalue * np.eye(len(reps), dtype=np.int64)
    # one row of the singular quotient is redundant; it becomes the normalization
    a_pin = int(label[pin])
    q[a_pin] = 0
    q[a_pin, a_pin] = 1
    rhs = np.zeros(len(reps), dtype=np.int64)
    rhs[a_pin] = 1
    w = solve_dense_modular(q, rhs)
    return [w[int(k)] for k in label]


def _exact_fixed_point(mat: sparse.csr_matrix, n: int, eigenvalue: int, pin: int, method: str,
                       config: Config) -> tuple[list[Fraction], str]:
    size = mat.shape[0]
    if method in ("auto", "exact", "dihedral"):
        sol, route = _dihedral_fixed_point(mat, n, eigenvalue, pin), "dihedral-quotient+modular-crt"
    else:
        a, rhs, rows = _fixed_point_system(mat, eigenvalue, pin)
        if method == "float":
            sol = solve_float_refined(a, rhs, rows, max_den=1)
            if sol is None:
                raise VerificationError("floating-point pre-pass did not yield an exact solution")
            route = "float+exact-refinement"
        elif method == "sparse":
            sol = solve_modular(rows, [int(v) for v in rhs], size, prime_count=config.prime_count)
            route = "sparse-modular-crt"
        else:
            raise ValueError(f"unknown method {method!r}")
    # the defining equation on the full space, whatever the route
    for i in range(size):
        lo, hi = mat.indptr[i], mat.indptr[i + 1]
        s = sum(int(v) * sol[int(c)] for c, v in zip(mat.indices[lo:hi], mat.data[lo:hi]))
        if s != eigenvalue * sol[i]:
            raise VerificationError("exact residual check failed")
    return sol, route


SOLVE_METHODS = ("auto", "exact", "dihedral", "sparse", "float")


def hamiltonian_fixed_point(n: int, orientation: str, method: str = "auto",
                            config: Config = DEFAULT) -> StationaryVector:
    """Exact solution of ``H v = 2n v`` in one orientation, pinned at the nested matching."""
    mat = hamiltonian(n, orientation, config)
    cert = perron_certificate(mat, 2 * n)
    mats = all_matchings(n)
    pin = matching_index(n)[fully_nested(n)]
    sol, route = _exact_fixed_point(mat, n, 2 * n, pin, method, config)
    return StationaryVector(n, dict(zip(mats, sol)), "nested=1", "hamiltonian",
                            {"orientation": orientation, "route": route,
                             "perron": cert["kernel_dimension_one"]})


# --- orientation calibration ----------------------------------------------------

_CALIBRATION: dict[int, str] = {}


def calibrate_orientation(n: int = 3, config: Config = DEFAULT) -> str:
    """Orientation whose ``2n``-eigenvector reproduces the FPL counts at size ``n``."""
    if n in _CALIBRATION:
        return _CALIBRATION[n]
    cached = _read_calibration(config)
    if cached is not None:
        _CALIBRATION[n] = cached
        return cached
    from wheelworks.fpl import count_by_pattern

    counts = count_by_pattern(n, config).counts
    hits = []
    for o in ORIENTATIONS:
        v = hamiltonian_fixed_point(n, o, "exact", config)
        if all(v.values[pi] == counts[pi] for pi in counts):
            hits.append(o)
    if len(hits) != 1:
        raise ConventionError(f"orientation calibration at n={n} is ambiguous: {hits}")
    _CALIBRATION[n] = hits[0]
    _write_calibration(config, hits[0], n)
    return hits[0]


def _calibration_path(config: Config) -> Path | None:
    return None if config.cache_dir is None else Path(config.cache_dir) / "calibration.json"


def _read_calibration(config: Config):
    path = _calibration_path(config)
    if path is None or not path.exists():
        return None
    try:
        data = json.loads(path.read_text())
    except ValueError:
        return None
    o = data.get("orientation")
    return o if o in ORIENTATIONS else None


def _write_calibration(config: Config, orientation: str, n: int):
    path = _calibration_path(config)
    if path is None:
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    data = {}
    if path.exists():
        try:
            data = json.loads(path.read_text())
        except ValueError:
            data = {}
    data.update({"orientation": orientation, "calibrated_at_n": n})
    path.write_text(json.dumps(data, indent=1))


_STATIONARY: dict[int, StationaryVector] = {}


def stationary_hamiltonian(n: int, method: str = "auto", config: Config = DEFAULT) -> StationaryVector:
    """The integer vector ``(A_pi)`` as the calibrated Hamiltonian fixed point."""
    if method not in SOLVE_METHODS:
        raise ValueError(f"unknown method {method!r}")
    if n in _STATIONARY:
        return _STATIONARY[n]
    cached = _read_vector(n, config)
    if cached is not None:
        _STATIONARY[n] = cached
        return cached
    orientation = calibrate_orientation(3, config) if n >= 3 else "transpose"
    vec = hamiltonian_fixed_point(n, orientation, method, config)
    if not vec.meta["perron"]:
        raise VerificationError("fixed-point space is not certified one-dimensional")
    _STATIONARY[n] = vec
    _write_vector(vec, config)
    return vec


def _vector_path(n, config):
    if config.cache_dir is None:
        return None
    return Path(config.cache_dir) / f"stationary-hamiltonian-n{n}.json"


def _read_vector(n, config):
    path = _vector_path(n, config)
    if path is None or not path.exists():
        return None
    try:
        data = json.loads(path.read_text())
        vec = StationaryVector.from_json(data)
    except (ValueError, KeyError):
        return None
    # entries from another format or another calibration are stale
    if data.get("format_version") != CACHE_VERSION:
        return None
    if vec.meta.get("orientation") != _read_calibration(config):
        return None
    return vec


def _write_vector(vec, config):
    path = _vector_path(vec.n, config)
    if path is None:
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps({**vec.to_json(), "format_version": CACHE_VERSION}))


# --- homogeneous Markov chain ----------------------------------------------------


def add_row(sigma: Matching, fill: int) -> Matching:
    """Matching on the bottom points after a row of plaquettes is placed below ``sigma``.

    Bit ``i`` of ``fill`` selects the plaquette in column ``i + 1``: 0 joins
    top to left and bottom to right, 1 joins top to right and bottom to left.
    Loops closed by the row are discarded.
    """
    m = len(sigma.partner)
    # nodes: ("T", i), ("B", i), ("H", i) with H_i between columns i and i+1 (cyclic)
    link: dict = {}
    edges = 0

    def join(u, v):
        nonlocal edges
        link.setdefault(u, []).append((v, edges))
        link.setdefault(v, []).append((u, edges))
        edges += 1

    for i in range(1, m + 1):
        left, right = ("H", (i - 2) % m + 1), ("H", i)
        if not (fill >> (i - 1)) & 1:
            join(("T", i), left)
            join(("B", i), right)
        else:
            join(("T", i), right)
            join(("B", i), left)
    for i in range(1, m + 1):
        j = sigma.partner[i - 1]
        if i < j:
            join(("T", i), ("T", j))
    partner = [0] * m
    for i in range(1, m + 1):
        if partner[i - 1]:
            continue
        cur, used = ("B", i), None
        while True:
            cur, used = next((w, e) for w, e in link[cur] if e != used)
            if cur[0] == "B":
                break
        partner[i - 1], partner[cur[1] - 1] = cur[1], i
    return Matching(tuple(partner))


def transition_matrix(n: int, p, config: Config = DEFAULT) -> list[list[Fraction]]:
    """Column-stochastic matrix: entry ``[pi][sigma]`` is the probability of ``sigma -> pi``."""
    check_cap("n (markov)", n, config.caps.markov_n_max)
    p = Fraction(p)
    if not 0 < p < 1:
        raise ValueError("p must lie strictly between 0 and 1")
    m = 2 * n
    idx = matching_index(n)
    size = len(idx)
    weights = []
    for fill in range(1 << m):
        ones = bin(fill).count("1")
        weights.append(p ** (m - ones) * (1 - p) ** ones)
    mat = [[Fraction(0)] * size for _ in range(size)]
    for sigma, c in idx.items():
        for fill in range(1 << m):
            mat[idx[add_row(sigma, fill)]][c] += weights[fill]
    return mat


def stationary_markov(n: int, p, config: Config = DEFAULT) -> StationaryVector:
    """Exact fixed point of the transition matrix, normalized to total 1."""
    mat = transition_matrix(n, p, config)
    size = len(mat)
    mats = all_matchings(n)
    # (T - I) with the last row replaced by the normalization
    a = [[mat[i][j] - (1 if i == j else 0) for j in range(size)] for i in range(size)]
    a[-1] = [Fraction(1)] * size
    b = [Fraction(0)] * (size - 1) + [Fraction(1)]
    sol = solve(a, b)
    for i in range(size):
        if sum(mat[i][j] * sol[j] for j in range(size)) != sol[i]:
            raise VerificationError("Markov fixed point fails the exact residual")
    return StationaryVector(n, dict(zip(mats, sol)), "sum=1", "markov", {"p": _fmt(p)})


def clear_memory_cache():
    _CALIBRATION.clear()
    _STATIONARY.clear()
