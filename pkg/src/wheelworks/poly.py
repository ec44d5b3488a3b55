"""Sparse polynomials in ``z_1..z_N`` over Q(q), Q(omega) or a rational specialization of q.

Storage
-------
A polynomial is kept as ``body / (q - 1/q)**scale`` where ``body`` lies in
``Z[q, 1/q][z]`` (or ``Q[q, 1/q][z]``).  Monomials of ``body`` are packed
into one Python integer: ``z_i`` occupies bits ``[16*(i-1), 16*i)`` and the
(signed) exponent of ``q`` sits above all of them.  Monomial products are
then integer additions, and the swap and substitution operators are
integer shifts.

A :class:`Domain` folds the ``q`` exponents after every operation: the
generic domain keeps them, :data:`OMEGA` reduces modulo ``q**2 = -1 - q``,
and :class:`RationalQ` multiplies the coefficient through by ``r**e``.
All three foldings are ring homomorphisms, so folding after each step
agrees with folding once at the end.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from wheelworks.errors import DomainError
from wheelworks.fields import Cyclotomic3, QFraction

BITS = 16
SLOT = (1 << BITS) - 1


class Domain:
    name = "abstract"

    def fold(self, terms: dict, qshift: int) -> dict:
        return terms

    def field_element(self, laurent: Mapping[int, object]):
        raise NotImplementedError

    def embed(self, value) -> dict[int, object]:
        """Coefficient value -> {q exponent: rational}."""
        if isinstance(value, (int, Fraction)):
            return {0: value} if value else {}
        if isinstance(value, QFraction):
            lau = value.to_laurent()
            if lau is None:
                raise DomainError(f"{value} is not a Laurent polynomial in q")
            return {e: _num(c) for e, c in lau.items()}
        raise DomainError(f"cannot embed {value!r} in domain {self.name}")

    def q_minus_qinv(self):
        return self.field_element({1: 1, -1: -1})

    def __repr__(self):
        return self.name


class GenericQ(Domain):
    name = "generic"

    def field_element(self, laurent):
        return QFraction.from_laurent(laurent)


class OmegaQ(Domain):
    name = "omega"

    def fold(self, terms, qshift):
        bad = [k for k in terms if not 0 <= (k >> qshift) <= 1]
        if not bad:
            return terms
        unit = 1 << qshift
        for k in bad:
            c = terms.pop(k)
            e = k >> qshift
            z = k - e * unit
            r = e % 3
            if r == 2:
                _acc(terms, z, -c)
                _acc(terms, z + unit, -c)
            else:
                _acc(terms, z + r * unit, c)
        return {k: c for k, c in terms.items() if c}

    def field_element(self, laurent):
        a = b = 0
        for e, c in laurent.items():
            r = e % 3
            if r == 0:
                a += c
            elif r == 1:
                b += c
            else:
                a -= c
                b -= c
        return Cyclotomic3(a, b)

    def embed(self, value):
        if isinstance(value, Cyclotomic3):
            return {e: c for e, c in ((0, value.a), (1, value.b)) if c}
        return super().embed(value)


class RationalQ(Domain):
    """``q`` specialized to a nonzero rational number."""

    def __init__(self, value):
        value = Fraction(value)
        if value == 0 or value * value == 1:
            raise DomainError("q must be a rational different from 0 and +-1")
        self.value = value
        self.name = f"q={value}"

    def fold(self, terms, qshift):
        bad = [k for k in terms if k >> qshift]
        if not bad:
            return terms
        unit = 1 << qshift
        for k in bad:
            c = terms.pop(k)
            e = k >> qshift
            _acc(terms, k - e * unit, c * self.value ** e)
        return {k: _num(c) for k, c in terms.items() if c}

    def field_element(self, laurent):
        return sum((Fraction(c) * self.value ** e for e, c in laurent.items()), Fraction(0))

    def __eq__(self, other):
        return isinstance(other, RationalQ) and other.value == self.value

    def __hash__(self):
        return hash(("q", self.value))


GENERIC = GenericQ()
OMEGA = OmegaQ()


def domain_from_name(name: str) -> Domain:
    if name == "generic":
        return GENERIC
    if name == "omega":
        return OMEGA
    if name.startswith("q="):
        return RationalQ(Fraction(name[2:]))
    raise ValueError(f"unknown domain {name!r}")


def _num(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


def _acc(d, k, c):
    v = d.get(k, 0) + c
    if v:
        d[k] = v
    else:
        d.pop(k, None)


class MultiPoly:
    __slots__ = ("nvars", "domain", "terms", "scale")

    def __init__(self, nvars: int, domain: Domain = GENERIC, terms: dict | None = None,
                 scale: int = 0):
        self.nvars = nvars
        self.domain = domain
        self.terms = {} if terms is None else terms
        self.scale = scale

    # -- construction ----------------------------------------------------

    @property
    def qshift(self) -> int:
        return BITS * self.nvars

    def _new(self, terms, scale=None) -> "MultiPoly":
        terms = self.domain.fold(terms, self.qshift)
        return MultiPoly(self.nvars, self.domain, terms, self.scale if scale is None else scale)

    @classmethod
    def zero(cls, nvars, domain=GENERIC):
        return cls(nvars, domain)

    @classmethod
    def constant(cls, value, nvars, domain=GENERIC):
        shift = BITS * nvars
        terms = {e << shift: c for e, c in domain.embed(value).items()}
        return cls(nvars, domain, domain.fold(terms, shift))

    @classmethod
    def var(cls, i: int, nvars: int, domain=GENERIC):
        _check_index(i, nvars)
        return cls(nvars, domain, {1 << (BITS * (i - 1)): 1})

    @classmethod
    def q(cls, nvars, domain=GENERIC, power: int = 1):
        shift = BITS * nvars
        return cls(nvars, domain, domain.fold({power << shift: 1}, shift))

    @classmethod
    def from_dict(cls, data: Mapping[Sequence[int], object], nvars: int, domain=GENERIC):
        """Build from ``{exponent tuple: coefficient}``; coefficients may be rational,
        Laurent :class:`QFraction` values or (in the omega domain) :class:`Cyclotomic3`."""
        shift = BITS * nvars
        terms: dict[int, object] = {}
        for exps, value in data.items():
            if len(exps) != nvars:
                raise ValueError(f"exponent vector {exps} has wrong length")
            z = _pack(exps)
            for e, c in domain.embed(value).items():
                _acc(terms, z + (e << shift), c)
        return cls(nvars, domain, domain.fold(terms, shift))

    @classmethod
    def linear(cls, coeffs: Mapping[int, tuple[object, int]], nvars, domain=GENERIC):
        """``sum c * q**e * z_i`` from ``{i: (c, e)}``; index 0 stands for the constant term."""
        shift = BITS * nvars
        terms: dict[int, object] = {}
        for i, (c, e) in coeffs.items():
            z = 0 if i == 0 else 1 << (BITS * (i - 1))
            _acc(terms, z + (e << shift), c)
        return cls(nvars, domain, domain.fold(terms, shift))

    def copy(self) -> "MultiPoly":
        return MultiPoly(self.nvars, self.domain, dict(self.terms), self.scale)

    # -- inspection --------------------------------------------------------

    def unpack(self, key: int) -> tuple[tuple[int, ...], int]:
        qs = self.qshift
        e = key >> qs
        z = key - (e << qs)
        return tuple((z >> (BITS * i)) & SLOT for i in range(self.nvars)), e

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def monomials(self) -> dict[tuple[int, ...], object]:
        """``{z exponents: coefficient of body}`` with coefficients in the domain's field."""
        grouped: dict[tuple[int, ...], dict[int, object]] = {}
        for key, c in self.terms.items():
            exps, e = self.unpack(key)
            grouped.setdefault(exps, {})[e] = c
        return {exps: self.domain.field_element(lau) for exps, lau in grouped.items()}

    def coefficient(self, exps: Sequence[int]):
        """Coefficient of ``z**exps`` in the polynomial itself (``scale`` applied)."""
        z = _pack(exps)
        qs = self.qshift
        lau = {}
        for key, c in self.terms.items():
            e = key >> qs
            if key - (e << qs) == z:
                lau[e] = c
        return self.domain.field_element(lau) / self.domain.q_minus_qinv() ** self.scale

    def total_degrees(self) -> set[int]:
        qs = self.qshift
        out = set()
        for key in self.terms:
            z = key - ((key >> qs) << qs)
            d = 0
            while z:
                d += z & SLOT
                z >>= BITS
            out.add(d)
        return out

    def degree(self) -> int:
        degs = self.total_degrees()
        return max(degs) if degs else -1

    def is_homogeneous(self, degree: int | None = None) -> bool:
        degs = self.total_degrees()
        if not degs:
            return True
        if len(degs) != 1:
            return False
        return degree is None or degs == {degree}

    def var_degree(self, i: int) -> int:
        _check_index(i, self.nvars)
        s = BITS * (i - 1)
        return max(((k >> s) & SLOT for k in self.terms), default=-1)

    # -- ring operations -----------------------------------------------

    def _compatible(self, other: "MultiPoly"):
        if other.nvars != self.nvars or other.domain != self.domain:
            raise ValueError("polynomials live in different rings")

    def _rescaled_terms(self, target: int) -> dict:
        if target == self.scale:
            return self.terms
        if target < self.scale:
            raise ValueError("cannot lower the scale")
        factor = MultiPoly.linear({0: (1, 1)}, self.nvars, self.domain) - \
            MultiPoly.linear({0: (1, -1)}, self.nvars, self.domain)
        out = MultiPoly(self.nvars, self.domain, self.terms)
        for _ in range(target - self.scale):
            out = out * factor
        return out.terms

    def __add__(self, other):
        if not isinstance(other, MultiPoly):
            other = MultiPoly.constant(other, self.nvars, self.domain)
        self._compatible(other)
        s = max(self.scale, other.scale)
        a, b = self._rescaled_terms(s), other._rescaled_terms(s)
        if len(a) < len(b):
            a, b = b, a
        out = dict(a)
        for k, c in b.items():
            _acc(out, k, c)
        return MultiPoly(self.nvars, self.domain, out, s)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.nvars, self.domain, {k: -c for k, c in self.terms.items()}, self.scale)

    def __sub__(self, other):
        if not isinstance(other, MultiPoly):
            other = MultiPoly.constant(other, self.nvars, self.domain)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return MultiPoly(self.nvars, self.domain, {}, self.scale)
            return MultiPoly(self.nvars, self.domain,
                             {k: _num(c * other) for k, c in self.terms.items()}, self.scale)
        if not isinstance(other, MultiPoly):
            other = MultiPoly.constant(other, self.nvars, self.domain)
        self._compatible(other)
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        out: dict[int, object] = {}
        get = out.get
        for kb, cb in b.items():
            for ka, ca in a.items():
                k = ka + kb
                out[k] = get(k, 0) + ca * cb
        out = {k: c for k, c in out.items() if c}
        return self._new(out, self.scale + other.scale)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = MultiPoly.constant(1, self.nvars, self.domain)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def mul_q(self, power: int) -> "MultiPoly":
        shift = power << self.qshift
        return self._new({k + shift: c for k, c in self.terms.items()})

    def mul_monomial(self, exps: Sequence[int], c=1, qpower: int = 0) -> "MultiPoly":
        shift = _pack(exps) + (qpower << self.qshift)
        return self._new({k + shift: c * v for k, v in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            other = MultiPoly.constant(other, self.nvars, self.domain)
        if other.nvars != self.nvars or other.domain != self.domain:
            return False
        s = max(self.scale, other.scale)
        return self._rescaled_terms(s) == other._rescaled_terms(s)

    __hash__ = None

    # -- the operators S_k and D_k -----------------------------------------

    def _pair(self, k: int) -> tuple[int, int]:
        if not 1 <= k <= self.nvars:
            raise ValueError(f"operator index {k} out of range 1..{self.nvars}")
        return BITS * (k - 1), BITS * (k % self.nvars)

    def swap(self, k: int) -> "MultiPoly":
        """``S_k``: exchange ``z_k`` and ``z_{k+1}``; ``k = N`` exchanges ``z_N`` and ``z_1``."""
        si, sj = self._pair(k)
        if si == sj:
            return self.copy()
        ui, uj = 1 << si, 1 << sj
        out = {}
        for key, c in self.terms.items():
            a = (key >> si) & SLOT
            b = (key >> sj) & SLOT
            out[key + (b - a) * (ui - uj)] = c
        return MultiPoly(self.nvars, self.domain, out, self.scale)

    def dk(self, k: int) -> "MultiPoly":
        """``D_k f = (q z_k - z_{k+1}/q) / (z_{k+1} - z_k) * (S_k f - f)``.

        With ``x = z_k``, ``y = z_{k+1}`` a monomial ``c x^a y^b`` maps to
        ``s c [ -x^m y^(m+d)/q + (q - 1/q) sum_{0<u<d} x^(m+u) y^(m+d-u) + q x^(m+d) y^m ]``
        where ``m = min(a, b)``, ``d = |a - b|`` and ``s = sign(a - b)``.
        """
        si, sj = self._pair(k)
        if si == sj:
            raise ValueError("D_k needs at least two variables")
        ui, uj = 1 << si, 1 << sj
        uq = 1 << self.qshift
        step = ui - uj
        out: dict[int, object] = {}
        get = out.get
        for key, c in self.terms.items():
            a = (key >> si) & SLOT
            b = (key >> sj) & SLOT
            if a == b:
                continue
            if a > b:
                d, m, sc = a - b, b, c
            else:
                d, m, sc = b - a, a, -c
            k0 = key + (m - a) * ui + (m + d - b) * uj
            kk = k0 - uq
            out[kk] = get(kk, 0) - sc
            ku = k0
            for _ in range(1, d):
                ku += step
                kk = ku + uq
                out[kk] = get(kk, 0) + sc
                kk = ku - uq
                out[kk] = get(kk, 0) - sc
            kk = k0 + d * step + uq
            out[kk] = get(kk, 0) + sc
        out = {k_: v for k_, v in out.items() if v}
        return self._new(out)

    # -- substitutions and evaluation -----------------------------------------

    def substitute_monomial(self, i: int, target: int | None, qpower: int = 0) -> "MultiPoly":
        """Replace ``z_i`` by ``q**qpower * z_target`` (or by ``q**qpower`` if target is None)."""
        _check_index(i, self.nvars)
        si = BITS * (i - 1)
        ui = 1 << si
        uj = 0 if target is None else 1 << (BITS * (target - 1))
        if target is not None:
            _check_index(target, self.nvars)
        move = uj - ui + (qpower << self.qshift)
        out: dict[int, object] = {}
        for key, c in self.terms.items():
            a = (key >> si) & SLOT
            _acc(out, key + a * move, c)
        return self._new(out)

    def substitute_monomials(self, subs: Mapping[int, tuple[int | None, int]]) -> "MultiPoly":
        """Simultaneous ``z_i -> q**e * z_t`` for ``subs = {i: (t, e)}``; targets must not be substituted."""
        moves = []
        for i, (t, e) in subs.items():
            _check_index(i, self.nvars)
            if t is not None:
                _check_index(t, self.nvars)
                if t in subs:
                    raise ValueError("substitution targets must stay fixed")
            si = BITS * (i - 1)
            uj = 0 if t is None else 1 << (BITS * (t - 1))
            moves.append((si, uj - (1 << si) + (e << self.qshift)))
        out: dict[int, object] = {}
        get = out.get
        for key, c in self.terms.items():
            nk = key
            for si, mv in moves:
                nk += ((key >> si) & SLOT) * mv
            out[nk] = get(nk, 0) + c
        return self._new({k: c for k, c in out.items() if c})

    def permute_variables(self, images: Sequence[int], qpowers: Sequence[int] | None = None) -> "MultiPoly":
        """Substitute ``z_i -> q**qpowers[i-1] * z_{images[i-1]}`` simultaneously."""
        nv = self.nvars
        if sorted(images) != list(range(1, nv + 1)):
            raise ValueError("images must be a permutation of 1..N")
        qpowers = qpowers or [0] * nv
        qs = self.qshift
        out: dict[int, object] = {}
        for key, c in self.terms.items():
            e = key >> qs
            z = key - (e << qs)
            nk = 0
            for i in range(nv):
                a = (z >> (BITS * i)) & SLOT
                if a:
                    nk += a << (BITS * (images[i] - 1))
                    e += a * qpowers[i]
            _acc(out, nk + (e << qs), c)
        return self._new(out)

    def substitute_var(self, i: int, expr: "MultiPoly") -> "MultiPoly":
        """Replace ``z_i`` by an arbitrary polynomial."""
        _check_index(i, self.nvars)
        self._compatible(expr)
        si = BITS * (i - 1)
        by_power: dict[int, dict[int, object]] = {}
        for key, c in self.terms.items():
            a = (key >> si) & SLOT
            by_power.setdefault(a, {})[key - (a << si)] = c
        result = MultiPoly(self.nvars, self.domain, {}, self.scale)
        power = MultiPoly.constant(1, self.nvars, self.domain)
        for a in range(max(by_power, default=-1) + 1):
            if a in by_power:
                part = MultiPoly(self.nvars, self.domain, by_power[a], self.scale)
                result = result + part * power
            power = power * expr
        return result

    def laurent_at_q_powers(self, eps: Sequence[int]) -> dict[int, object]:
        """Body evaluated at ``z_i = q**eps[i-1]`` as ``{q exponent: coefficient}``."""
        nv = self.nvars
        qs = self.qshift
        out: dict[int, object] = {}
        active = [(BITS * i, eps[i]) for i in range(nv) if eps[i]]
        for key, c in self.terms.items():
            e = key >> qs
            for s, w in active:
                e += ((key >> s) & SLOT) * w
            out[e] = out.get(e, 0) + c
        return {e: c for e, c in out.items() if c}

    def eval_q_powers(self, eps: Sequence[int]):
        """The polynomial at ``z_i = q**eps[i-1]``, an element of the domain's field."""
        dom = self.domain
        val = dom.field_element(self.laurent_at_q_powers(eps))
        if self.scale:
            val = val / dom.q_minus_qinv() ** self.scale
        return val

    def eval_at_one(self):
        return self.eval_q_powers([0] * self.nvars)

    def evaluate(self, point: Sequence[object]):
        """Evaluate at an arbitrary point with coordinates in the domain's field."""
        if len(point) != self.nvars:
            raise ValueError("point has wrong dimension")
        dom = self.domain
        total = dom.field_element({})
        for exps, coeff in self.monomials().items():
            term = coeff
            for x, a in zip(point, exps):
                if a:
                    term = term * x ** a
            total = total + term
        if self.scale:
            total = total / dom.q_minus_qinv() ** self.scale
        return total

    # -- text ----------------------------------------------------------------

    def dump(self) -> str:
        """Canonical text: one line per monomial, sorted by exponent vector (descending)."""
        mons = self.monomials()
        lines = [f"# nvars={self.nvars} domain={self.domain.name} scale={self.scale}"]
        for exps in sorted(mons, reverse=True):
            mono = "*".join(f"z{i + 1}^{a}" if a > 1 else f"z{i + 1}" for i, a in enumerate(exps) if a)
            lines.append(f"({mons[exps]}) {mono or '1'}")
        return "\n".join(lines)

    def to_json(self) -> dict:
        rows = []
        for key, c in sorted(self.terms.items()):
            exps, e = self.unpack(key)
            rows.append([list(exps), e, str(Fraction(c))])
        return {"nvars": self.nvars, "domain": self.domain.name, "scale": self.scale, "terms": rows}

    @classmethod
    def from_json(cls, data: dict) -> "MultiPoly":
        nvars = data["nvars"]
        dom = domain_from_name(data["domain"])
        shift = BITS * nvars
        terms = {}
        for exps, e, c in data["terms"]:
            terms[_pack(exps) + (e << shift)] = _num(Fraction(c))
        return cls(nvars, dom, terms, data["scale"])

    def __repr__(self):
        return f"<MultiPoly nvars={self.nvars} {self.domain.name} terms={len(self.terms)} scale={self.scale}>"


def _pack(exps: Sequence[int]) -> int:
    z = 0
    for i, a in enumerate(exps):
        if a < 0 or a > SLOT:
            raise ValueError(f"exponent {a} out of range")
        z += a << (BITS * i)
    return z


def _check_index(i, nvars):
    if not 1 <= i <= nvars:
        raise IndexError(f"variable index {i} out of range 1..{nvars}")


def swap_k(k: int, f: MultiPoly) -> MultiPoly:
    return f.swap(k)


def dk_apply(k: int, f: MultiPoly) -> MultiPoly:
    return f.dk(k)


def apply_word(word: Iterable[int], f: MultiPoly) -> MultiPoly:
    """Apply ``D`` operators in order, first element first."""
    for k in word:
        f = f.dk(k)
    return f


def product_rule_check(k: int, f: MultiPoly, g: MultiPoly) -> bool:
    """``D_k(fg) == D_k(f) S_k(g) + f D_k(g)``."""
    return (f * g).dk(k) == f.dk(k) * g.swap(k) + f * g.dk(k)


def random_poly(nvars: int, rng, domain: Domain = GENERIC, terms: int = 5, max_degree: int = 3,
                qrange: int = 2) -> MultiPoly:
    """Random polynomial with small integer coefficients times powers of ``q``."""
    shift = BITS * nvars
    out: dict[int, object] = {}
    for _ in range(terms):
        exps = [rng.randint(0, max_degree) for _ in range(nvars)]
        _acc(out, _pack(exps) + (rng.randint(-qrange, qrange) << shift), rng.choice((-3, -2, -1, 1, 2, 3)))
    return MultiPoly(nvars, domain, domain.fold(out, shift))


OPERATOR_IDENTITIES = ("idempotent", "commute", "braid")


def operator_identity_check(identity: str, f: MultiPoly, i: int, j: int | None = None) -> bool:
    """Hecke-type relations of the ``D`` operators on one polynomial ``f``.

    ``idempotent``: ``D_i D_i f = (q + 1/q) D_i f``.
    ``commute``: ``D_i D_j f = D_j D_i f`` for ``|i - j| > 1``.
    ``braid``: ``D_{i+1} D_i D_{i+1} f + D_i f = D_i D_{i+1} D_i f + D_{i+1} f``.
    """
    if identity == "idempotent":
        g = f.dk(i)
        qq = MultiPoly.q(f.nvars, f.domain) + MultiPoly.q(f.nvars, f.domain, -1)
        return g.dk(i) == qq * g
    if identity == "commute":
        if j is None or abs(i - j) <= 1:
            raise ValueError("commute needs |i - j| > 1")
        return f.dk(j).dk(i) == f.dk(i).dk(j)
    if identity == "braid":
        return apply_word((i + 1, i, i + 1), f) + f.dk(i) == apply_word((i, i + 1, i), f) + f.dk(i + 1)
    raise ValueError(f"identity must be one of {OPERATOR_IDENTITIES}")
