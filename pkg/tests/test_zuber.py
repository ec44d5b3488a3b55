from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from wheelworks.config import Caps, Config
from wheelworks.errors import CapacityError
from wheelworks.fpl import count_by_pattern
from wheelworks.matchings import all_matchings, concat, parse_matching
from wheelworks.zuber import (
    a_sequence, a_value, block_matching, expected_invariants, hook_f, partitions,
    syt_brute_force, verify_zuber,
)

P = parse_matching


def test_hook_examples():
    assert hook_f((1,)).value == 1
    assert hook_f((2, 1)).value == 2
    assert hook_f((3, 1)).value == 3
    assert hook_f(()).value == 1
    with pytest.raises(ValueError):
        hook_f((1, 2))


@pytest.mark.parametrize("size", range(0, 7))
def test_hook_formula_against_tableau_count(size):
    for lam in partitions(size):
        assert hook_f(lam).value == syt_brute_force(lam)


def test_partitions():
    assert list(partitions(4)) == [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]


def test_block_matching():
    assert block_matching(P("()()"), P("(())"), 1) == P("(()())(())")
    assert block_matching(P("()"), P("()"), 0) == P("()()")


def test_values_match_brute_force():
    for n1 in (1, 2, 3):
        for n2 in range(1, 6 - n1):
            counts = count_by_pattern(n1 + n2).counts
            for a in all_matchings(n1):
                for b in all_matchings(n2):
                    assert a_sequence(a, b, [0]) == [(0, counts[concat(a, b)])]
    assert a_sequence(P("()()"), P("(())"), [0, 1]) == [
        (0, count_by_pattern(4).counts[P("()()(())")]),
        (1, count_by_pattern(5).counts[P("(()())(())")])]


def test_nested_pair_is_constant_one():
    assert [a for _, a in a_sequence(P("(())"), P("(())"), range(6))] == [1] * 6


@pytest.mark.parametrize("p1,p2,degree,lead", [
    ("()()", "(())", 1, Fraction(1)),
    ("()()", "()()", 2, Fraction(1)),
    ("()()()", "(())", 3, Fraction(1, 3)),
    ("(())", "(())", 0, Fraction(1)),
])
def test_examples(p1, p2, degree, lead):
    assert expected_invariants(P(p1), P(p2)) == (degree, lead)
    rep = verify_zuber(P(p1), P(p2), max(10 - len(p1) // 2 - len(p2) // 2, degree + 2))
    assert rep.passed and rep.integral_positive
    assert rep.fit.degree == degree and rep.fit.leading == lead
    assert rep.fit.consistency_points >= 2
    data = rep.to_json()
    assert data["pass"]["all"] and data["expected_leading"] == str(lead)


@given(st.sampled_from([(a, b) for n1 in (1, 2, 3) for n2 in (1, 2) for a in all_matchings(n1)
                        for b in all_matchings(n2) if expected_invariants(a, b)[0] <= 3]))
def test_symmetry_of_invariants(pair):
    a, b = pair
    m_max = expected_invariants(a, b)[0] + 2
    r1, r2 = verify_zuber(a, b, m_max), verify_zuber(b, a, m_max)
    assert (r1.fit.degree, r1.fit.leading) == (r2.fit.degree, r2.fit.leading)


def test_wrong_degree_is_reported():
    rep = verify_zuber(P("()()"), P("()()"), 6)
    assert rep.passed
    rep.expected_degree = 1
    assert not rep.degree_ok and not rep.passed


def test_capacity():
    cfg = Config(caps=Caps(hamiltonian_n_max=6))
    with pytest.raises(CapacityError):
        a_sequence(P("()()"), P("()()"), range(4), cfg)
    assert a_value(P("()()")) == 1
