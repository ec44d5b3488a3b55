import json
from fractions import Fraction

import pytest
from hypothesis import given, settings

from strategies import matchings
from wheelworks.config import Caps, Config
from wheelworks.errors import CapacityError, DomainError
from wheelworks.fields import Cyclotomic3, QFraction
from wheelworks.matchings import all_matchings, diagram_to_matching, matching_to_diagram, nest, parse_matching, rotate
from wheelworks.poly import GENERIC, OMEGA, MultiPoly
from wheelworks import wheel
from wheelworks.wheel import (
    WheelPoly, base_eigen_check, corners, d2n_closure_check, d_basis, d_operator_trichotomy,
    d_pair, d_pair_word, d_table, d_word, ev, ev_matrix_rank_at, expand, local_qkz_check,
    psi, psi_base, psi_table, rotation_identity_check, split_basis_check, table_from_json,
    table_to_json, triangularity_report, well_definedness_check, wheel_check,
)

P = parse_matching
Q = QFraction.q()


def f(i, j, nv, dom=GENERIC):
    """``(q z_i - z_j / q) / (q - 1/q)``."""
    p = MultiPoly.linear({i: (1, 1), j: (-1, -1)}, nv, dom)
    p.scale = 1
    return p


def test_base_examples():
    assert psi_base(1).poly == MultiPoly.constant(1, 2)
    assert psi_base(2).poly == f(1, 2, 4) * f(3, 4, 4)
    assert psi_base(3).eval_at_one() == 1
    assert psi(P("(())")) == psi_base(2)


def test_first_recursion_step():
    target = -f(2, 3, 4) * (MultiPoly.q(4, power=-1) * f(2, 4, 4) + MultiPoly.q(4) * f(1, 2, 4))
    assert psi(P("()()")).poly == target
    assert psi(P("()()")).eval_at_one() == -(Q + 1 / Q)
    assert psi(P("()()"), OMEGA).eval_at_one() == Cyclotomic3(1)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_psi_properties(n):
    for pi in all_matchings(n):
        p = psi(pi)
        assert wheel_check(p)
        assert p.poly.is_homogeneous(n * (n - 1))


def test_wheel_check_rejects():
    assert wheel_check(psi_base(2))
    assert not wheel_check(WheelPoly(2, MultiPoly.constant(1, 4)))
    assert not wheel_check(WheelPoly(1, MultiPoly.var(1, 2) ** 2))
    # right degree, but a generic product does not vanish on the wheels
    assert not wheel_check(WheelPoly(2, MultiPoly.var(1, 4) * MultiPoly.var(2, 4)))


def test_ev_examples():
    assert ev(P("(())"), psi_base(2)) == 1
    assert ev(P("()()"), psi_base(2)) == 0
    assert ev(P("()()"), WheelPoly(2, MultiPoly.zero(4))) == 0


@pytest.mark.parametrize("n", [2, 3, 4])
def test_ev_matrix_is_diagonal(n):
    # observed structure: ev_sigma(Psi_pi) = [sigma = pi] (-(q + 1/q))**|lambda(pi)|
    table = psi_table(n)
    for pi in all_matchings(n):
        weight = (-(Q + 1 / Q)) ** sum(matching_to_diagram(pi))
        for sigma in all_matchings(n):
            assert ev(sigma, table[pi]) == (weight if pi == sigma else 0)


def test_d_words():
    assert d_word(P("(())")) == []
    assert d_word(P("()()")) == [2]
    assert d_word(P("()")) == []
    n = 6
    assert d_word(diagram_to_matching((4, 2, 1, 1), n)) == [n, n + 1, n + 2, n + 3, n - 1, n, n - 2, n - 3]
    m = 2 * n
    assert d_pair_word(diagram_to_matching((4, 2, 1, 1), n), n) == [
        k % m or m for k in (0, 1, 2, 3, -1, 0, -2, -3)]


def test_d_basis_examples():
    assert d_basis(P("(())")) == psi_base(2)
    assert d_basis(P("()()")).poly == psi_base(2).poly.dk(2)
    assert d_pair(P("(())"), P("()()")).poly == d_basis(nest(P("(())"), 2), OMEGA).poly.dk(8)
    assert d_pair(P("()()"), P("(())")) == d_basis(nest(P("()()"), 2), OMEGA)
    with pytest.raises(DomainError):
        d_pair(P("()"), P("()"), GENERIC)


@pytest.mark.parametrize("n", [2, 3])
def test_recursion_is_path_independent(n):
    assert well_definedness_check(n) == []
    assert all(corners(pi) for pi in all_matchings(n) if pi != nest(P("()"), n - 1))


@pytest.mark.parametrize("n", [2, 3])
def test_unitriangular_change_of_basis(n):
    rep = triangularity_report(n)
    assert rep["supported_below"] and rep["unit_diagonal"]
    assert expand(psi(P("()()")), d_table(2))[P("()()")] == 1
    coeffs = expand(psi(all_matchings(n)[0]), psi_table(n))
    assert [c for c in coeffs.values() if c] == [1]


def test_ev_matrix_rank_at_rationals():
    for qv in (Fraction(2), Fraction(3, 7), Fraction(-5, 2)):
        r, s = ev_matrix_rank_at(3, qv)
        assert r == s == 5


@pytest.mark.parametrize("n", [1, 2, 3])
def test_rotation_identity(n):
    assert rotation_identity_check(n, GENERIC)
    assert rotation_identity_check(n, OMEGA)


def test_rotation_literal_reading_fails():
    # the shift with rho^-1 and no scalar is not an identity at generic q
    assert not rotation_identity_check(2, GENERIC, "literal")
    assert not rotation_identity_check(3, OMEGA, "literal")
    with pytest.raises(ValueError):
        rotation_identity_check(2, GENERIC, "other")


@pytest.mark.parametrize("n", [1, 2, 3])
def test_local_exchange_identity(n):
    assert local_qkz_check(n, GENERIC)
    assert local_qkz_check(n, OMEGA)


def test_local_exchange_literal_reading_fails():
    assert not local_qkz_check(2, GENERIC, "literal")


def test_local_exchange_example():
    # n=2, i=2: the correction sum is empty, so D_2 Psi_(()) = Psi_()()
    assert psi_base(2).poly.dk(2) == psi(P("()()")).poly


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_base_eigenvector(n):
    assert base_eigen_check(n)


def test_d_trichotomy_and_closure():
    assert d_operator_trichotomy(3) == []
    assert d2n_closure_check(3)


def split_cases(max_n=4):
    out = []
    for n1 in range(1, max_n):
        for n2 in range(1, max_n - n1 + 1):
            out += [(a, b) for a in all_matchings(n1) for b in all_matchings(n2)]
    return out


def test_split_basis_expansion():
    cases = split_cases()
    assert len(cases) == 19
    assert all(split_basis_check(a, b)["holds"] for a, b in cases)
    # the opposite rotation direction is not spanned in general
    assert not all(split_basis_check(a, b, shift=-1)["holds"] for a, b in cases)


def test_caps(tmp_path):
    tight = Config(caps=Caps(wheel_generic_n_max=2))
    wheel.clear_memory_cache()
    with pytest.raises(CapacityError):
        psi_table(3, GENERIC, tight)
    wheel.clear_memory_cache()


def test_table_cache_round_trip(tmp_path):
    for dom in (GENERIC, OMEGA):
        t = psi_table(3, dom)
        back = table_from_json(json.loads(json.dumps(table_to_json(t))))
        assert back.entries == t.entries and back.kind == t.kind
    cfg = Config(cache_dir=tmp_path)
    wheel.clear_memory_cache()
    first = psi_table(3, GENERIC, cfg)
    assert list(tmp_path.iterdir())
    wheel.clear_memory_cache()
    assert psi_table(3, GENERIC, cfg).entries == first.entries
    wheel.clear_memory_cache()


@settings(max_examples=20)
@given(matchings(1, 3))
def test_rotation_invariance_at_one(pi):
    assert psi(rotate(pi), OMEGA).eval_at_one() == psi(pi, OMEGA).eval_at_one()
