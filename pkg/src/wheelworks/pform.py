"""Products of the generators f(i,j), g(i), h(i) and the explicit D_k action on them.

    f(i,j) = (q z_i - z_j/q) / (q - 1/q)
    g(i)   = (q - z_i/q)     / (q - 1/q)
    h(i)   = (q z_i - 1/q)   / (q - 1/q)

All three equal 1 at ``z = 1``, so a sum of products evaluates there to the
sum of its coefficients.  Coefficients are Laurent polynomials in ``q``
with integer coefficients, kept as ``{exponent: int}`` maps and converted to
a field element only on evaluation.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from wheelworks.interp import PolyFit, fit_poly
from wheelworks.poly import GENERIC, Domain, MultiPoly

Laurent = dict  # {q exponent: integer}

QQ = {1: 1, -1: 1}          # q + 1/q


def _lmul(a: Laurent, b: Laurent) -> Laurent:
    out: dict[int, int] = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
    return {e: c for e, c in out.items() if c}


def _ladd(a: Laurent, b: Laurent) -> Laurent:
    out = dict(a)
    for e, c in b.items():
        out[e] = out.get(e, 0) + c
    return {e: c for e, c in out.items() if c}


def _lscale(a: Laurent, s: int) -> Laurent:
    return {e: c * s for e, c in a.items()} if s else {}


@dataclass(frozen=True)
class PForm:
    """``coeff * prod f(i,j)^alpha[i,j] * prod g(i)^beta[i] * prod h(i)^gamma[i]``, indices 1-based."""
    n: int
    alpha: tuple                      # ((i, j, exponent), ...) sorted row-major, exponents > 0
    beta: tuple                       # length 2n
    gamma: tuple                      # length 2n
    coeff: tuple = ((0, 1),)          # Laurent polynomial as sorted (exponent, coefficient) pairs

    @classmethod
    def make(cls, n: int, alpha=None, beta=None, gamma=None, coeff: Laurent | None = None) -> "PForm":
        m = 2 * n
        a: dict[tuple[int, int], int] = {}
        if alpha:
            items = alpha.items() if isinstance(alpha, dict) else ((tuple(k[:2]), k[2]) for k in alpha)
            for (i, j), e in items:
                if i == j or not (1 <= i <= m and 1 <= j <= m):
                    raise ValueError(f"bad generator index f({i},{j})")
                if e < 0:
                    raise ValueError("exponents must be nonnegative")
                if e:
                    a[(i, j)] = a.get((i, j), 0) + e
        b = tuple(beta) if beta is not None else (0,) * m
        g = tuple(gamma) if gamma is not None else (0,) * m
        if len(b) != m or len(g) != m or min(b + g, default=0) < 0:
            raise ValueError("beta and gamma must be nonnegative vectors of length 2n")
        c = coeff if coeff is not None else {0: 1}
        return cls(n, tuple(sorted((i, j, e) for (i, j), e in a.items())), b, g,
                   tuple(sorted((e, v) for e, v in c.items() if v)))

    @property
    def coeff_laurent(self) -> Laurent:
        return dict(self.coeff)

    def alpha_dict(self) -> dict:
        return {(i, j): e for i, j, e in self.alpha}

    def factors(self) -> list[tuple[str, tuple, int]]:
        """Generator powers in the frozen product order: f row-major, then g, then h."""
        out: list[tuple[str, tuple, int]] = [("f", (i, j), e) for i, j, e in self.alpha]
        out += [("g", (i,), e) for i, e in enumerate(self.beta, start=1) if e]
        out += [("h", (i,), e) for i, e in enumerate(self.gamma, start=1) if e]
        return out

    def record(self) -> tuple:
        return (self.coeff_laurent, self.alpha_dict(), self.beta, self.gamma)

    def to_poly(self, domain: Domain = GENERIC) -> MultiPoly:
        nv = 2 * self.n
        p = MultiPoly.constant(1, nv, domain)
        nfac = 0
        for kind, idx, e in self.factors():
            if kind == "f":
                lin = MultiPoly.linear({idx[0]: (1, 1), idx[1]: (-1, -1)}, nv, domain)
            elif kind == "g":
                lin = MultiPoly.linear({0: (1, 1), idx[0]: (-1, -1)}, nv, domain)
            else:
                lin = MultiPoly.linear({idx[0]: (1, 1), 0: (-1, -1)}, nv, domain)
            p = p * lin ** e
            nfac += e
        c = MultiPoly.from_dict({(0,) * nv: _laurent_value(self.coeff_laurent, domain)}, nv, domain)
        p = p * c
        p.scale = nfac
        return p


def _laurent_value(lau: Laurent, domain: Domain):
    return domain.field_element(lau) if lau else domain.field_element({})


@dataclass
class PFormSum:
    n: int
    terms: list = field(default_factory=list)      # PForm
    origins: list = field(default_factory=list)    # ("A", (i, j)) / ("B", (i,)) / ("C", (i,)) per term

    def __len__(self):
        return len(self.terms)

    def to_poly(self, domain: Domain = GENERIC) -> MultiPoly:
        total = MultiPoly.zero(2 * self.n, domain)
        for t in self.terms:
            total = total + t.to_poly(domain)
        return total

    def coefficient_sum(self) -> Laurent:
        acc: Laurent = {}
        for t in self.terms:
            acc = _ladd(acc, t.coeff_laurent)
        return acc

    def records(self) -> list[tuple]:
        return [t.record() for t in self.terms]


def _succ(k: int, n: int) -> int:
    return k % (2 * n) + 1


def _swap_index(i: int, k: int, n: int) -> int:
    k1 = _succ(k, n)
    return k1 if i == k else k if i == k1 else i


def dk_generator(k: int, which: str, idx: Sequence[int], n: int) -> tuple[Laurent, tuple[int, int]] | None:
    """``D_k`` of one generator as ``(coefficient, (k, k+1))`` meaning ``coefficient * f(k, k+1)``; ``None`` for 0.

    ``k + 1`` is read cyclically, so ``k = 2n`` uses the pair ``(2n, 1)``.
    """
    m = 2 * n
    if not 1 <= k <= m:
        raise ValueError(f"operator index {k} out of range")
    k1 = _succ(k, n)
    pair = (k, k1)
    if which == "f":
        i, j = idx
        if (i, j) == (k, k1):
            return dict(QQ), pair
        if (i, j) == (k1, k):
            return _lscale(QQ, -1), pair
        if i == k:
            return {1: 1}, pair
        if i == k1:
            return {1: -1}, pair
        if j == k:
            return {-1: -1}, pair
        if j == k1:
            return {-1: 1}, pair
        return None
    (i,) = idx
    if which == "g":
        if i == k:
            return {-1: -1}, pair
        if i == k1:
            return {-1: 1}, pair
        return None
    if which == "h":
        if i == k:
            return {1: 1}, pair
        if i == k1:
            return {1: -1}, pair
        return None
    raise ValueError(f"unknown generator {which!r}")


def _swapped(kind: str, idx: tuple, k: int, n: int) -> tuple:
    return tuple(_swap_index(i, k, n) for i in idx)


def dk_pform(k: int, P: PForm) -> PFormSum:
    """Product rule over the frozen factor order, power rule within each factor."""
    n = P.n
    facs = P.factors()
    out = PFormSum(n)
    base = P.coeff_laurent
    for t, (kind, idx, e) in enumerate(facs):
        d = dk_generator(k, kind, idx, n)
        if d is None:
            continue
        c, pair = d
        coeff = _lmul(base, c)
        sw = _swapped(kind, idx, k, n)
        prefix = facs[:t]
        suffix = [(kd, _swapped(kd, ix, k, n), ee) for kd, ix, ee in facs[t + 1:]]
        origin = ({"f": "A", "g": "B", "h": "C"}[kind], idx)
        for l in range(e):
            parts = prefix + [("f", pair, 1), (kind, idx, l), (kind, sw, e - 1 - l)] + suffix
            out.terms.append(_assemble(n, parts, coeff))
            out.origins.append(origin)
    return out


def _assemble(n: int, parts: Iterable[tuple[str, tuple, int]], coeff: Laurent) -> PForm:
    m = 2 * n
    alpha: dict[tuple[int, int], int] = {}
    beta = [0] * m
    gamma = [0] * m
    for kind, idx, e in parts:
        if not e:
            continue
        if kind == "f":
            alpha[idx] = alpha.get(idx, 0) + e
        elif kind == "g":
            beta[idx[0] - 1] += e
        else:
            gamma[idx[0] - 1] += e
    return PForm.make(n, alpha, beta, gamma, coeff)


def dk_pform_sum(k: int, s: PFormSum) -> PFormSum:
    out = PFormSum(s.n)
    for t in s.terms:
        r = dk_pform(k, t)
        out.terms.extend(r.terms)
        out.origins.extend(r.origins)
    return out


def apply_chain(ops: Sequence[int], P: PForm | PFormSum) -> PFormSum:
    """Apply ``D`` operators in list order, first element first."""
    s = P if isinstance(P, PFormSum) else PFormSum(P.n, [P], [None])
    for k in ops:
        s = dk_pform_sum(k, s)
    return s


def eval_at_one(s: PFormSum | PForm, domain: Domain = GENERIC):
    """Value at ``z_1 = ... = z_2n = 1``: the sum of the coefficients."""
    if isinstance(s, PForm):
        return _laurent_value(s.coeff_laurent, domain)
    return _laurent_value(s.coefficient_sum(), domain)


def example_closed_form(alpha12: int, alpha21: int, beta: Sequence[int], gamma: Sequence[int]) -> Laurent:
    """``(q+1/q)(a12 - a21) + (b2 - b1)/q + q(c1 - c2)`` as a Laurent map."""
    out = _lscale(QQ, alpha12 - alpha21)
    out = _ladd(out, {-1: beta[1] - beta[0]})
    out = _ladd(out, {1: gamma[0] - gamma[1]})
    return out


# --- patterns affine in m --------------------------------------------------------


@dataclass(frozen=True)
class AffineExponentPattern:
    """Exponents ``c + d*m``; each entry is a pair ``(c, d)`` with ``c >= 0`` and ``d`` in ``{0, 1}``."""
    n: int
    alpha: tuple        # ((i, j, c, d), ...)
    beta: tuple         # ((c, d), ...) of length 2n
    gamma: tuple

    def __post_init__(self):
        for entry in list(self.beta) + list(self.gamma) + [a[2:] for a in self.alpha]:
            c, d = entry
            if c < 0 or d not in (0, 1):
                raise ValueError("pattern entries need c >= 0 and d in {0, 1}")
        if len(self.beta) != 2 * self.n or len(self.gamma) != 2 * self.n:
            raise ValueError("beta and gamma must have length 2n")

    def instantiate(self, m: int) -> PForm:
        if m < 0:
            raise ValueError("m must be nonnegative")
        return PForm.make(
            self.n,
            {(i, j): c + d * m for i, j, c, d in self.alpha},
            [c + d * m for c, d in self.beta],
            [c + d * m for c, d in self.gamma],
        )

    @classmethod
    def random(cls, n: int, rng: random.Random, max_const: int = 2, density: float = 0.4) -> "AffineExponentPattern":
        m = 2 * n
        alpha = []
        for i in range(1, m + 1):
            for j in range(1, m + 1):
                if i != j and rng.random() < density:
                    alpha.append((i, j, rng.randint(0, max_const), rng.randint(0, 1)))
        beta = tuple((rng.randint(0, max_const), rng.randint(0, 1)) if rng.random() < density else (0, 0)
                     for _ in range(m))
        gamma = tuple((rng.randint(0, max_const), rng.randint(0, 1)) if rng.random() < density else (0, 0)
                      for _ in range(m))
        return cls(n, tuple(alpha), beta, gamma)


def poly_in_m(ops: Sequence[int], pattern: AffineExponentPattern, m_values: Sequence[int],
              domain: Domain = GENERIC) -> PolyFit:
    """Values at ``z = 1`` of the chain applied to the instantiated pattern, fitted in ``m``.

    The first ``len(ops) + 1`` points determine the interpolant; the rest are
    consistency witnesses (the degree bound says they must lie on it).
    """
    m_values = list(m_values)
    if len(m_values) < len(ops) + 2:
        raise ValueError("need at least len(ops) + 2 sample points")
    samples = [(m, eval_at_one(apply_chain(ops, pattern.instantiate(m)), domain)) for m in m_values]
    return fit_poly(samples, degree=len(ops))
