"""Exact coefficient fields: rationals, Q(q) and Q(omega).

Rationals are plain :class:`fractions.Fraction` (or ``int``) values.
:class:`QFraction` is an element of the rational function field Q(q) kept
in a canonical form, :class:`Cyclotomic3` is ``a + b*omega`` with
``omega**2 + omega + 1 == 0``, which realizes the specialization
``q = exp(2*pi*i/3)``.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Mapping, Union

Rational = Fraction
Number = Union[int, Fraction]

# --- dense univariate integer polynomials, coefficient tuples low -> high ---


def _trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


def _padd(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    return _trim(out)


def _pneg(a):
    return tuple(-c for c in a)


def _pmul(a, b):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return tuple(out)


def _pscale(a, c):
    return tuple(x * c for x in a) if c else ()


def _content(p) -> int:
    g = 0
    for c in p:
        g = gcd(g, c)
    return g


def _low_order(p) -> int:
    for i, c in enumerate(p):
        if c:
            return i
    raise ValueError("zero polynomial")


def _pdivmod_rational(a, b):
    """Quotient and remainder over Q (coefficients become Fractions)."""
    a = [Fraction(x) for x in a]
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lb = Fraction(b[-1])
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        f = a[-1] / lb
        q[shift] = f
        for i, y in enumerate(b):
            a[i + shift] -= f * y
        a = list(_trim(a))
    return tuple(q), tuple(a)


def _primitive(p):
    """Scale a polynomial with rational coefficients to a primitive integer one."""
    if not p:
        return ()
    den = 1
    for c in p:
        if isinstance(c, Fraction):
            den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in p]
    g = _content(ints)
    if ints[-1] < 0:
        g = -g
    return tuple(c // g for c in ints)


def _pgcd(a, b):
    """Primitive gcd over Z[q] with positive leading coefficient."""
    a, b = _primitive(a), _primitive(b)
    while b:
        _, r = _pdivmod_rational(a, b)
        a, b = b, _primitive(r)
    return a


def _pexact_div(a, b):
    q, r = _pdivmod_rational(a, b)
    if r:
        raise ArithmeticError("inexact polynomial division")
    return tuple(int(c) if c.denominator == 1 else c for c in q)


def _is_monomial(p) -> bool:
    return len(p) > 0 and all(c == 0 for c in p[:-1])


class QFraction:
    """An element ``num(q) / den(q)`` of Q(q).

    Canonical form: ``num`` and ``den`` are integer polynomials without a
    common factor, the integer content of the pair is 1 and the leading
    coefficient of ``den`` is positive.  Zero is ``0 / 1``.
    """

    __slots__ = ("num", "den")

    def __init__(self, num=(), den=(1,), _normalized=False):
        if isinstance(num, (int, Fraction)):
            fr = Fraction(num)
            num, den = (fr.numerator,), (fr.denominator,)
        if _normalized:
            self.num, self.den = num, den
            return
        num, den = _trim(num), _trim(den)
        if not den:
            raise ZeroDivisionError("QFraction with zero denominator")
        self.num, self.den = _normalize(num, den)

    @classmethod
    def from_laurent(cls, terms: Mapping[int, Number]) -> "QFraction":
        """Build ``sum c_e q**e`` from a mapping exponent -> coefficient."""
        terms = {e: c for e, c in terms.items() if c}
        if not terms:
            return cls((), (1,), True)
        lo = min(terms)
        hi = max(terms)
        shift = -lo if lo < 0 else 0
        coeffs = [Fraction(0)] * (hi + shift + 1)
        for e, c in terms.items():
            coeffs[e + shift] = Fraction(c)
        den = [0] * shift + [1]
        lcm = 1
        for c in coeffs:
            lcm = lcm * c.denominator // gcd(lcm, c.denominator)
        num = tuple(int(c * lcm) for c in coeffs)
        den = tuple(d * lcm for d in den)
        return cls(num, den)

    @classmethod
    def q(cls) -> "QFraction":
        return cls((0, 1), (1,), True)

    def is_zero(self) -> bool:
        return not self.num

    def to_laurent(self) -> dict[int, Fraction] | None:
        """Exponent -> coefficient if the value is a Laurent polynomial, else ``None``."""
        if not _is_monomial(self.den):
            return None
        k = len(self.den) - 1
        d = self.den[-1]
        return {i - k: Fraction(c, d) for i, c in enumerate(self.num) if c}

    def specialize(self, value: Number) -> Fraction:
        """Evaluate at a rational ``q``; raises ZeroDivisionError on a pole."""
        num = sum(Fraction(c) * Fraction(value) ** i for i, c in enumerate(self.num))
        den = sum(Fraction(c) * Fraction(value) ** i for i, c in enumerate(self.den))
        if den == 0:
            raise ZeroDivisionError(f"pole at q = {value}")
        return num / den

    def _coerce(self, other):
        if isinstance(other, QFraction):
            return other
        if isinstance(other, (int, Fraction)):
            return QFraction(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return QFraction(_padd(self.num, other.num), self.den)
        return QFraction(_padd(_pmul(self.num, other.den), _pmul(other.num, self.den)),
                         _pmul(self.den, other.den))

    __radd__ = __add__

    def __neg__(self):
        return QFraction(_pneg(self.num), self.den, True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return QFraction(_pmul(self.num, other.num), _pmul(self.den, other.den))

    __rmul__ = __mul__

    def inverse(self) -> "QFraction":
        if not self.num:
            raise ZeroDivisionError("inverse of zero")
        return QFraction(self.den, self.num)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = QFraction(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __bool__(self):
        return bool(self.num)

    def __repr__(self):
        return f"QFraction({self})"

    def __str__(self):
        num = _poly_str(self.num)
        if self.den == (1,):
            return num
        return f"({num})/({_poly_str(self.den)})"


def _normalize(num, den):
    if not num:
        return (), (1,)
    if _is_monomial(den):
        k = min(_low_order(num), len(den) - 1)
        if k:
            num, den = num[k:], den[k:]
    elif den != (1,) and len(den) > 1:
        g = _pgcd(num, den)
        if len(g) > 1:
            num, den = _pexact_div(num, g), _pexact_div(den, g)
            num, den = _primitive_pair(num, den)
    c = gcd(_content(num), _content(den))
    if den[-1] < 0:
        c = -c
    if c != 1:
        num = tuple(x // c for x in num)
        den = tuple(x // c for x in den)
    return num, den


def _primitive_pair(num, den):
    # exact division by a primitive gcd can leave Fractions; clear them jointly
    lcm = 1
    for c in num + den:
        if isinstance(c, Fraction):
            lcm = lcm * c.denominator // gcd(lcm, c.denominator)
    return tuple(int(c * lcm) for c in num), tuple(int(c * lcm) for c in den)


def _poly_str(p) -> str:
    if not p:
        return "0"
    parts = []
    for i in range(len(p) - 1, -1, -1):
        c = p[i]
        if not c:
            continue
        mono = "" if i == 0 else ("q" if i == 1 else f"q^{i}")
        if mono and abs(c) == 1:
            s = mono
        elif mono:
            s = f"{abs(c)}*{mono}"
        else:
            s = str(abs(c))
        parts.append(("-" if c < 0 else "+") + s)
    out = "".join(parts)
    return out[1:] if out[0] == "+" else out


def _num(x) -> Number:
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


class Cyclotomic3:
    """``a + b*omega`` with rational ``a, b`` and ``omega**2 = -1 - omega``."""

    __slots__ = ("a", "b")

    def __init__(self, a: Number = 0, b: Number = 0):
        self.a = _num(a)
        self.b = _num(b)

    @classmethod
    def omega(cls) -> "Cyclotomic3":
        return cls(0, 1)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def _coerce(self, other):
        if isinstance(other, Cyclotomic3):
            return other
        if isinstance(other, (int, Fraction)):
            return Cyclotomic3(other, 0)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Cyclotomic3(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic3(-self.a, -self.b)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Cyclotomic3(self.a - other.a, self.b - other.b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b, c, d = self.a, self.b, other.a, other.b
        bd = b * d
        return Cyclotomic3(a * c - bd, a * d + b * c - bd)

    __rmul__ = __mul__

    def conjugate(self) -> "Cyclotomic3":
        # omega -> omega**2 = -1 - omega
        return Cyclotomic3(self.a - self.b, -self.b)

    def norm(self) -> Fraction:
        a, b = self.a, self.b
        return Fraction(a * a - a * b + b * b)

    def inverse(self) -> "Cyclotomic3":
        nrm = self.norm()
        if nrm == 0:
            raise ZeroDivisionError("inverse of zero")
        c = self.conjugate()
        return Cyclotomic3(Fraction(c.a) / nrm, Fraction(c.b) / nrm)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = Cyclotomic3(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.a, self.b)) if self.b else hash(self.a)

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        return f"Cyclotomic3({self.a}, {self.b})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        w = "w" if self.b == 1 else ("-w" if self.b == -1 else f"{self.b}*w")
        if self.a == 0:
            return w
        return f"{self.a}{'' if w.startswith('-') else '+'}{w}"


def parse_rational(text: str) -> Fraction:
    return Fraction(text.strip())


def format_rational(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"
