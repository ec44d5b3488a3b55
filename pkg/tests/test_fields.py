from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from wheelworks.fields import Cyclotomic3, QFraction, format_rational, parse_rational

small = st.fractions(min_value=-20, max_value=20, max_denominator=12)
laurent = st.dictionaries(st.integers(-4, 4), st.integers(-5, 5), max_size=4)


def qf(d):
    return QFraction.from_laurent(d)


@given(laurent, laurent, laurent)
def test_qfraction_ring_laws(a, b, c):
    x, y, z = qf(a), qf(b), qf(c)
    assert x + y == y + x
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x - x == QFraction(0)


@given(laurent, laurent.filter(lambda d: any(d.values())))
def test_qfraction_division(a, b):
    x, y = qf(a), qf(b)
    assert (x / y) * y == x


@given(laurent, small.filter(lambda v: v != 0))
def test_specialize_is_a_homomorphism(a, v):
    x = qf(a)
    assert (x * x + x).specialize(v) == x.specialize(v) ** 2 + x.specialize(v)


def test_qfraction_canonical_form():
    q = QFraction.q()
    x = (q * q - 1) / (q - 1)
    assert x == q + 1
    assert hash(x) == hash(q + 1)
    assert x.to_laurent() == {0: 1, 1: 1}
    assert (1 / (q + 1)).to_laurent() is None
    assert (q + 1 / q).to_laurent() == {-1: 1, 1: 1}
    with pytest.raises(ZeroDivisionError):
        QFraction((1,), ())


def test_cyclotomic_relations():
    w = Cyclotomic3.omega()
    assert w ** 3 == 1
    assert w + w.inverse() == -1
    assert 1 + w + w * w == 0
    assert w.norm() == 1
    assert (Cyclotomic3(2, 3) / Cyclotomic3(2, 3)) == 1


@given(small, small, small, small)
def test_cyclotomic_field_laws(a, b, c, d):
    x, y = Cyclotomic3(a, b), Cyclotomic3(c, d)
    assert x * y == y * x
    assert x * x.conjugate() == x.norm()
    if not y.is_zero():
        assert (x / y) * y == x


def test_rational_text_round_trip():
    assert parse_rational(" 3/6 ") == Fraction(1, 2)
    assert format_rational(Fraction(-4, 6)) == "-2/3"
    assert format_rational(5) == "5/1"
