"""Wheel polynomials: the base product, the Psi recursion, the box-reading bases.

Every wheel polynomial of order ``n`` lives in ``2n`` variables and is built
from the base product by divided-difference operators, so all of them share
the base product's scale ``(q - 1/q)**(-n(n-1))``.  Linear algebra on the
dual evaluations is therefore done on the bodies (Laurent polynomials in q).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Iterable, Mapping

from wheelworks.config import DEFAULT, Config, check_cap
from wheelworks.errors import DomainError, VerificationError
from wheelworks.linalg import SingularMatrixError, particular_solution, rank, solve, solve_many
from wheelworks.matchings import (
    Matching, all_matchings, concat, diagonal, fully_nested, leq, matching_to_diagram,
    nest, remove_box, rotate, tl_apply, tl_preimage,
)
from wheelworks.poly import GENERIC, OMEGA, Domain, MultiPoly, RationalQ, domain_from_name

CACHE_VERSION = 1


@dataclass
class WheelPoly:
    n: int
    poly: MultiPoly

    @property
    def domain(self) -> Domain:
        return self.poly.domain

    def eval_at_one(self):
        return self.poly.eval_at_one()

    def __eq__(self, other):
        return isinstance(other, WheelPoly) and self.n == other.n and self.poly == other.poly

    def __add__(self, other: "WheelPoly") -> "WheelPoly":
        return WheelPoly(self.n, self.poly + other.poly)

    def __sub__(self, other: "WheelPoly") -> "WheelPoly":
        return WheelPoly(self.n, self.poly - other.poly)


@dataclass
class WheelBasisTable:
    kind: str                       # "Psi", "DBasis" or "DPair"
    n: int
    domain: Domain
    entries: dict = field(default_factory=dict)
    # matching -> (predecessor, operator index); the recursion chain actually used
    provenance: dict = field(default_factory=dict)

    def __getitem__(self, key) -> WheelPoly:
        return self.entries[key]

    def __contains__(self, key):
        return key in self.entries

    def keys(self):
        return list(self.entries)


def _domain_cap(n: int, domain: Domain, config: Config):
    if domain is GENERIC:
        check_cap("n (generic q)", n, config.caps.wheel_generic_n_max)
    else:
        check_cap("n (specialized q)", n, config.caps.wheel_cyclo_n_max)


def _q_plus_qinv(nvars: int, domain: Domain) -> MultiPoly:
    return MultiPoly.linear({0: (1, 1)}, nvars, domain) + MultiPoly.linear({0: (1, -1)}, nvars, domain)


def psi_base(n: int, domain: Domain = GENERIC) -> WheelPoly:
    """Product of ``(q z_i - z_j/q)(q z_{n+i} - z_{n+j}/q)`` over ``i < j <= n``, over ``(q - 1/q)**(n(n-1))``."""
    if n < 1:
        raise ValueError("n must be positive")
    nv = 2 * n
    p = MultiPoly.constant(1, nv, domain)
    for off in (0, n):
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                p = p * MultiPoly.linear({off + i: (1, 1), off + j: (-1, -1)}, nv, domain)
    p.scale = n * (n - 1)
    return WheelPoly(n, p)


def removal_step(pi: Matching) -> tuple[Matching, int] | None:
    """``(sigma, j)``: ``sigma`` is ``pi`` minus the rightmost box of its bottom row, on diagonal ``j``."""
    lam = matching_to_diagram(pi)
    if not lam:
        return None
    j = diagonal(pi.n, len(lam), lam[-1])
    sigma = remove_box(pi, j)
    assert sigma is not None
    return sigma, j


def corners(pi: Matching) -> list[tuple[Matching, int]]:
    """Every ``(sigma, j)`` with ``sigma`` covered by ``pi`` on diagonal ``j``."""
    out = []
    for j in range(2, 2 * pi.n - 1):
        sigma = remove_box(pi, j)
        if sigma is not None:
            out.append((sigma, j))
    return out


def _by_size(n: int) -> list[Matching]:
    return sorted(all_matchings(n), key=lambda m: (sum(matching_to_diagram(m)), m))


def _recursion_step(pi: Matching, sigma: Matching, j: int, entries: Mapping) -> MultiPoly:
    p = entries[sigma].poly.dk(j)
    for tau in tl_preimage(j, sigma):
        if tau != sigma and tau != pi:
            p = p - entries[tau].poly
    return p


_TABLES: dict[tuple, WheelBasisTable] = {}


def psi_table(n: int, domain: Domain = GENERIC, config: Config = DEFAULT) -> WheelBasisTable:
    """All ``Psi_pi`` for ``pi`` of size ``n``, built in order of diagram size."""
    key = ("Psi", n, domain.name)
    if key in _TABLES:
        return _TABLES[key]
    _domain_cap(n, domain, config)
    table = _load_cached("Psi", n, domain, config)
    if table is None:
        table = WheelBasisTable("Psi", n, domain)
        for pi in _by_size(n):
            step = removal_step(pi)
            if step is None:
                table.entries[pi] = psi_base(n, domain)
                continue
            sigma, j = step
            table.entries[pi] = WheelPoly(n, _recursion_step(pi, sigma, j, table.entries))
            table.provenance[pi] = (sigma, j)
        _store_cached(table, config)
    _TABLES[key] = table
    return table


def psi(pi: Matching, domain: Domain = GENERIC, config: Config = DEFAULT) -> WheelPoly:
    return psi_table(pi.n, domain, config)[pi]


def psi_along(pi: Matching, sigma: Matching, j: int, table: WheelBasisTable) -> WheelPoly:
    """The recursion evaluated through an arbitrary cover ``sigma -> pi`` on diagonal ``j``."""
    return WheelPoly(pi.n, _recursion_step(pi, sigma, j, table.entries))


def d_word(pi: Matching) -> list[int]:
    """Operator indices for ``D_pi``, first applied first: rows top to bottom, boxes left to right."""
    lam = matching_to_diagram(pi)
    return [diagonal(pi.n, r, c) for r, row in enumerate(lam, start=1) for c in range(1, row + 1)]


def d_table(n: int, domain: Domain = GENERIC, config: Config = DEFAULT) -> WheelBasisTable:
    key = ("DBasis", n, domain.name)
    if key in _TABLES:
        return _TABLES[key]
    _domain_cap(n, domain, config)
    table = _load_cached("DBasis", n, domain, config)
    if table is None:
        table = WheelBasisTable("DBasis", n, domain)
        for pi in _by_size(n):
            step = removal_step(pi)
            if step is None:
                table.entries[pi] = psi_base(n, domain)
                continue
            # the last box read is the rightmost box of the bottom row
            sigma, j = step
            table.entries[pi] = WheelPoly(n, table.entries[sigma].poly.dk(j))
            table.provenance[pi] = (sigma, j)
        _store_cached(table, config)
    _TABLES[key] = table
    return table


def d_basis(pi: Matching, domain: Domain = GENERIC, config: Config = DEFAULT) -> WheelPoly:
    return d_table(pi.n, domain, config)[pi]


def d_pair_word(pi2: Matching, n: int) -> list[int]:
    """Indices for the second stage of ``D_{pi1,pi2}``: ``col - row`` reduced into ``1..2n``."""
    lam = matching_to_diagram(pi2)
    out = []
    for r, row in enumerate(lam, start=1):
        for c in range(1, row + 1):
            k = (c - r) % (2 * n)
            out.append(k or 2 * n)
    return out


def d_pair(pi1: Matching, pi2: Matching, domain: Domain = OMEGA, config: Config = DEFAULT) -> WheelPoly:
    """``D_{pi1,pi2}``; needs ``q`` a primitive cube root of unity because ``D_{2n}`` appears."""
    if domain is not OMEGA:
        raise DomainError("D_{pi1,pi2} uses D_{2n}, which is only available at q = omega")
    n = pi1.n + pi2.n
    p = d_basis(nest(pi1, pi2.n), domain, config).poly
    for k in d_pair_word(pi2, n):
        p = p.dk(k)
    return WheelPoly(n, p)


def d_pair_table(n1: int, n2: int, config: Config = DEFAULT) -> WheelBasisTable:
    key = ("DPair", (n1, n2), OMEGA.name)
    if key in _TABLES:
        return _TABLES[key]
    table = WheelBasisTable("DPair", n1 + n2, OMEGA)
    for a in all_matchings(n1):
        for b in all_matchings(n2):
            table.entries[(a, b)] = d_pair(a, b, OMEGA, config)
    _TABLES[key] = table
    return table


# --- checks ----------------------------------------------------------------


def wheel_check(p: WheelPoly) -> bool:
    """Homogeneous of degree ``n(n-1)`` and zero under ``z_j = q^2 z_i, z_k = q^4 z_i`` for all ``i<j<k``."""
    n = p.n
    poly = p.poly
    if poly.nvars != 2 * n:
        return False
    if poly.is_zero():
        return True
    if not poly.is_homogeneous(n * (n - 1)):
        return False
    for i, j, k in combinations(range(1, 2 * n + 1), 3):
        if not poly.substitute_monomials({j: (i, 2), k: (i, 4)}).is_zero():
            return False
    return True


def ev_point(pi: Matching) -> list[int]:
    """Exponents ``eps_i``: -1 at left endpoints of arches, +1 at right endpoints."""
    return [-1 if pi.is_left(i) else 1 for i in range(1, 2 * pi.n + 1)]


def ev(pi: Matching, p: WheelPoly):
    """``p(q**eps_1, ..., q**eps_2n)``."""
    if p.poly.nvars != 2 * pi.n:
        raise ValueError("matching and polynomial sizes differ")
    return p.poly.eval_q_powers(ev_point(pi))


def _body_value(pi: Matching, p: MultiPoly, scale: int):
    """Value at the ev point after multiplying through by ``(q - 1/q)**scale``."""
    dom = p.domain
    v = dom.field_element(p.laurent_at_q_powers(ev_point(pi)))
    if scale > p.scale:
        v = v * dom.q_minus_qinv() ** (scale - p.scale)
    elif scale < p.scale:
        v = v / dom.q_minus_qinv() ** (p.scale - scale)
    return v


def ev_matrix(basis: WheelBasisTable, points: Iterable[Matching] | None = None,
              keys: list | None = None) -> tuple[list[list], list, int]:
    """Rows indexed by evaluation points, columns by basis keys; values on bodies at a common scale."""
    points = list(points) if points is not None else all_matchings(basis.n)
    keys = keys if keys is not None else basis.keys()
    scale = max(basis[k].poly.scale for k in keys)
    mat = [[_body_value(pi, basis[k].poly, scale) for k in keys] for pi in points]
    return mat, keys, scale


def expand(p: WheelPoly, basis: WheelBasisTable, keys: list | None = None,
           require_unique: bool = True) -> dict:
    """Coefficients ``c`` with ``sum c_k basis_k = p``, recovered from the ev system.

    With ``require_unique`` the ev matrix must be square and nonsingular; otherwise
    a first solution of a possibly dependent spanning set is returned (``None`` if
    there is none).  The result is verified against ``p`` exactly.
    """
    points = all_matchings(basis.n)
    mat, keys, scale = ev_matrix(basis, points, keys)
    rhs = [_body_value(pi, p.poly, scale) for pi in points]
    if require_unique:
        if len(keys) != len(points):
            raise SingularMatrixError("basis size differs from the number of functionals")
        sol = solve(mat, rhs)
    else:
        cols = [[mat[r][c] for r in range(len(points))] for c in range(len(keys))]
        sol = particular_solution(cols, rhs)
        if sol is None:
            return None
    coeffs = {k: c for k, c in zip(keys, sol)}
    if not _combination(coeffs, basis, p.poly) == p.poly:
        raise VerificationError("ev-system solution does not reproduce the polynomial")
    return coeffs


def _combination(coeffs: Mapping, basis: WheelBasisTable, like: MultiPoly) -> MultiPoly:
    total = MultiPoly.zero(like.nvars, like.domain)
    for k, c in coeffs.items():
        if c:
            total = total + basis[k].poly * MultiPoly.constant(c, like.nvars, like.domain)
    return total


def expand_many(polys: Mapping, basis: WheelBasisTable) -> dict:
    """:func:`expand` for several polynomials sharing one elimination; keyed like ``polys``."""
    points = all_matchings(basis.n)
    mat, keys, scale = ev_matrix(basis, points)
    names = list(polys)
    rhs = [[_body_value(pi, polys[k].poly, scale) for pi in points] for k in names]
    sols = solve_many(mat, rhs)
    out = {}
    for name, sol in zip(names, sols):
        coeffs = dict(zip(keys, sol))
        if not _combination(coeffs, basis, polys[name].poly) == polys[name].poly:
            raise VerificationError("ev-system solution does not reproduce the polynomial")
        out[name] = coeffs
    return out


def ev_matrix_rank_at(n: int, qvalue) -> tuple[int, int]:
    """Rank of ``[ev_pi(Psi_sigma)]`` with ``q`` specialized to a rational; returns (rank, size)."""
    table = psi_table(n, GENERIC)
    mat, keys, _ = ev_matrix(table)
    specialized = [[x.specialize(qvalue) for x in row] for row in mat]
    return rank(specialized), len(keys)


def rotation_identity_check(n: int, domain: Domain = GENERIC, reading: str = "calibrated") -> bool:
    """Cyclic shift of the variables against rotation of the matchings.

    ``calibrated``: ``q**(3(n-1)) Psi_{rho pi}(z_1..z_2n) == Psi_pi(z_2, ..., z_2n, q^6 z_1)``
    for every ``pi``; the scalar is 1 at ``q = omega``.
    ``literal``: ``Psi_{rho^-1 pi}(z_1..z_2n) == Psi_pi(z_2, ..., z_2n, q^6 z_1)``.
    """
    table = psi_table(n, domain)
    nv = 2 * n
    images = list(range(2, nv + 1)) + [1]
    qpowers = [0] * (nv - 1) + [6]
    for pi in all_matchings(n):
        rhs = table[pi].poly.permute_variables(images, qpowers)
        if reading == "calibrated":
            lhs = table[rotate(pi, 1)].poly.mul_q(3 * (n - 1))
        elif reading == "literal":
            lhs = table[rotate(pi, -1)].poly
        else:
            raise ValueError(f"unknown reading {reading!r}")
        if lhs != rhs:
            return False
    return True


def local_qkz_residuals(n: int, domain: Domain = GENERIC, reading: str = "weighted"):
    """Yield ``(i, pi, ok)`` for the local exchange identity.

    ``weighted``: component ``sigma`` of ``e_i`` acting on the vector with loop weight
    ``-(q + 1/q)``, i.e. ``sum_{tau in e_i^-1(sigma), tau != sigma} Psi_tau
    - [e_i sigma = sigma](q + 1/q) Psi_sigma == D_i Psi_sigma - (q + 1/q) Psi_sigma``.
    ``literal``: ``Psi_{e_i pi} + (q + 1/q) Psi_pi == D_i Psi_pi``.
    """
    table = psi_table(n, domain)
    nv = 2 * n
    qq = _q_plus_qinv(nv, domain)
    for i in range(1, 2 * n):
        for pi in all_matchings(n):
            own = table[pi].poly
            rhs = own.dk(i) - qq * own
            if reading == "weighted":
                lhs = MultiPoly.zero(nv, domain)
                for tau in tl_preimage(i, pi):
                    if tau != pi:
                        lhs = lhs + table[tau].poly
                if tl_apply(i, pi) == pi:
                    lhs = lhs - qq * own
            elif reading == "literal":
                lhs = table[tl_apply(i, pi)].poly
            else:
                raise ValueError(f"unknown reading {reading!r}")
            yield i, pi, lhs == rhs


def local_qkz_check(n: int, domain: Domain = GENERIC, reading: str = "weighted") -> bool:
    return all(ok for _, _, ok in local_qkz_residuals(n, domain, reading))


def base_eigen_check(n: int, domain: Domain = GENERIC) -> bool:
    """``D_i Psi_() = (q + 1/q) Psi_()`` for every ``i`` outside ``{n, 2n}``."""
    base = psi_base(n, domain).poly
    qq = _q_plus_qinv(2 * n, domain)
    return all(base.dk(i) == qq * base for i in range(1, 2 * n) if i != n)


def well_definedness_check(n: int, domain: Domain = GENERIC) -> list[tuple[Matching, int]]:
    """Every cover ``sigma -> pi`` reproduces the tabulated ``Psi_pi``; returns the failures."""
    table = psi_table(n, domain)
    bad = []
    for pi in all_matchings(n):
        for sigma, j in corners(pi):
            if psi_along(pi, sigma, j, table) != table[pi]:
                bad.append((pi, j))
    return bad


def triangularity_report(n: int, domain: Domain = GENERIC) -> dict:
    """Expand every ``Psi_pi`` in the D basis and check support below ``pi`` with unit diagonal."""
    ps, ds = psi_table(n, domain), d_table(n, domain)
    out = {"n": n, "supported_below": True, "unit_diagonal": True, "expansions": {}}
    allc = expand_many({pi: ps[pi] for pi in all_matchings(n)}, ds)
    for pi in all_matchings(n):
        coeffs = allc[pi]
        support = [t for t, c in coeffs.items() if c]
        if not all(leq(t, pi) for t in support):
            out["supported_below"] = False
        if coeffs[pi] != 1:
            out["unit_diagonal"] = False
        out["expansions"][pi.word()] = {t.word(): str(c) for t, c in coeffs.items() if c}
    return out


def d_operator_trichotomy(n: int, domain: Domain = GENERIC) -> list[tuple[Matching, int]]:
    """For ``sigma`` and a diagonal ``i`` along which a box could be added, ``D_i D_sigma``
    must equal ``D_pi`` when ``sigma`` is covered by ``pi`` on ``i`` and otherwise expand
    with support below ``sigma``.  Only the free diagonals enter; returns the failures.
    """
    from wheelworks.matchings import add_box

    ds = d_table(n, domain)
    bad = []
    for sigma in all_matchings(n):
        for i in _free_diagonals(sigma):
            img = WheelPoly(n, ds[sigma].poly.dk(i))
            pi = add_box(sigma, i)
            if pi is not None:
                if img != ds[pi]:
                    bad.append((sigma, i))
                continue
            coeffs = expand(img, ds)
            if not all(leq(t, sigma) for t, c in coeffs.items() if c):
                bad.append((sigma, i))
    return bad


def _free_diagonals(sigma: Matching) -> list[int]:
    """Diagonals ``1 < i < 2n`` holding fewer boxes of ``lambda(sigma)`` than the staircase allows."""
    n = sigma.n
    lam = matching_to_diagram(sigma)
    free = []
    for i in range(2, 2 * n):
        slots = [(r, r + i - n) for r in range(1, n) if r + i - n >= 1 and 2 * r + i - n <= n]
        used = sum(1 for r, c in slots if r <= len(lam) and c <= lam[r - 1])
        if used < len(slots):
            free.append(i)
    return free


def split_basis_check(pi1: Matching, pi2: Matching, shift: int = 1) -> dict:
    """``Psi_{rho^{n2}(pi1 pi2)}`` in the span of ``D_{tau1,tau2}`` (``tau_i <= pi_i``) with unit
    coefficient on ``D_{pi1,pi2}``; works at ``q = omega``.
    """
    n1, n2 = pi1.n, pi2.n
    n = n1 + n2
    target = psi(rotate(concat(pi1, pi2), shift * n2), OMEGA)
    pairs = d_pair_table(n1, n2)
    keys = [(a, b) for (a, b) in pairs.keys() if leq(a, pi1) and leq(b, pi2) and (a, b) != (pi1, pi2)]
    rest = target - pairs[(pi1, pi2)]
    if rest.poly.is_zero():
        coeffs = {}
    elif not keys:
        coeffs = None
    else:
        coeffs = expand(rest, pairs, keys=keys, require_unique=False)
    ok = coeffs is not None
    return {
        "pi1": pi1.word(), "pi2": pi2.word(), "n": n, "holds": ok,
        "coefficients": None if coeffs is None else {f"{a.word()}|{b.word()}": str(c)
                                                     for (a, b), c in coeffs.items() if c},
    }


def d2n_closure_check(n: int) -> bool:
    """At ``q = omega`` the cyclic ``D_{2n}`` maps every ``Psi_pi`` back into the wheel space."""
    table = psi_table(n, OMEGA)
    return all(wheel_check(WheelPoly(n, table[pi].poly.dk(2 * n))) for pi in all_matchings(n))


# --- cache ---------------------------------------------------------------------


def _cache_path(kind: str, n: int, domain: Domain, config: Config) -> Path | None:
    if config.cache_dir is None:
        return None
    tag = domain.name.replace("/", "_").replace("=", "")
    return Path(config.cache_dir) / f"wheel-{kind}-n{n}-{tag}-v{CACHE_VERSION}.json"


def table_to_json(table: WheelBasisTable) -> dict:
    return {
        "version": CACHE_VERSION,
        "kind": table.kind,
        "n": table.n,
        "domain": table.domain.name,
        "entries": [
            {"matching": k.word(), "poly": v.poly.to_json(),
             "chain": None if k not in table.provenance else
             [table.provenance[k][0].word(), table.provenance[k][1]]}
            for k, v in table.entries.items()
        ],
    }


def table_from_json(data: dict) -> WheelBasisTable:
    from wheelworks.matchings import parse_matching

    if data.get("version") != CACHE_VERSION:
        raise ValueError("cache version mismatch")
    table = WheelBasisTable(data["kind"], data["n"], domain_from_name(data["domain"]))
    for row in data["entries"]:
        pi = parse_matching(row["matching"])
        table.entries[pi] = WheelPoly(table.n, MultiPoly.from_json(row["poly"]))
        if row["chain"]:
            table.provenance[pi] = (parse_matching(row["chain"][0]), row["chain"][1])
    return table


def _load_cached(kind, n, domain, config) -> WheelBasisTable | None:
    path = _cache_path(kind, n, domain, config)
    if path is None or not path.exists():
        return None
    try:
        return table_from_json(json.loads(path.read_text()))
    except (ValueError, KeyError):
        return None


def _store_cached(table: WheelBasisTable, config: Config) -> None:
    path = _cache_path(table.kind, table.n, table.domain, config)
    if path is None:
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(table_to_json(table)))


def clear_memory_cache() -> None:
    _TABLES.clear()
