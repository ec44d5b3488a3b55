from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from wheelworks.fields import QFraction
from wheelworks.interp import fit_poly, newton_coefficients

coeffs = st.lists(st.fractions(min_value=-9, max_value=9, max_denominator=6), min_size=1, max_size=5)


def horner(cs, x):
    v = Fraction(0)
    for c in reversed(cs):
        v = v * x + c
    return v


def test_examples():
    fit = fit_poly([(0, 1), (1, 1), (2, 1)])
    assert fit.degree == 0 and fit.coefficients[0] == 1
    fit = fit_poly([(0, 1), (1, 2), (2, 3)])
    assert fit.degree == 1 and fit.coefficients[:2] == [1, 1]


@given(coeffs, st.integers(1, 3))
def test_recovers_polynomials(cs, extra):
    d = len(cs) - 1
    samples = [(m, horner(cs, m)) for m in range(d + 1 + extra)]
    fit = fit_poly(samples, degree=d)
    assert fit.consistent and fit.consistency_points == extra
    assert all(fit(Fraction(m)) == y for m, y in samples)
    while cs and cs[-1] == 0:
        cs = cs[:-1]
    assert fit.degree == len(cs) - 1


def test_inconsistency_is_reported():
    fit = fit_poly([(0, 0), (1, 1), (2, 4), (3, 9)], degree=1)
    assert not fit.consistent and fit.mismatches


def test_validation():
    with pytest.raises(ValueError):
        fit_poly([(0, 1)])
    with pytest.raises(ValueError):
        fit_poly([(0, 1), (0, 2)])


def test_laurent_coefficients():
    q = QFraction.q()
    ys = [q * m * m + 1 for m in range(4)]
    cs = newton_coefficients(list(range(4)), ys)
    fit = fit_poly(list(zip(range(4), ys)), degree=2)
    assert fit.consistent and fit.leading == q
    assert cs == [1, 0, q]
