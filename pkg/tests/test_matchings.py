import pytest
from hypothesis import given
from hypothesis import strategies as st

from strategies import matchings
from wheelworks.errors import CapacityError, MatchingParseError
from wheelworks.matchings import (
    Matching, add_box, all_matchings, catalan, concat, diagram_size, diagram_to_matching,
    format_matching, fully_nested, iter_covers, leq, matching_index, matching_to_diagram, nest,
    parse_matching, reflect, remove_box, rotate, tl_apply, tl_preimage, validate_diagram,
)

P = parse_matching


def test_counts_are_catalan():
    assert [len(all_matchings(n)) for n in range(8)] == [catalan(n) for n in range(8)]
    assert all_matchings(0) == [Matching(())]
    assert len(all_matchings(3)) == 5
    assert len(all_matchings(10)) == 16796


def test_enumeration_cap():
    with pytest.raises(CapacityError):
        all_matchings(12, limit=1000)


def test_canonical_order_and_index():
    mats = all_matchings(4)
    assert mats == sorted(mats)
    idx = matching_index(4)
    assert all(idx[pi] == k for k, pi in enumerate(mats))


@pytest.mark.parametrize("word,lam", [("(())", ()), ("()()", (1,)), ("()()()", (2, 1)), ("((()))", ())])
def test_diagram_examples(word, lam):
    assert matching_to_diagram(P(word)) == lam
    assert diagram_to_matching(lam, len(word) // 2) == P(word)


@given(matchings(0, 6))
def test_diagram_bijection(pi):
    lam = validate_diagram(matching_to_diagram(pi), pi.n)
    assert diagram_to_matching(lam, pi.n) == pi
    assert diagram_size(lam) <= pi.n * (pi.n - 1) // 2


def test_diagram_validation():
    with pytest.raises(ValueError):
        validate_diagram((2,), 2)
    with pytest.raises(ValueError):
        validate_diagram((1, 2), 4)


@given(matchings(0, 5), st.integers(0, 3))
def test_nesting_keeps_diagram(pi, k):
    assert matching_to_diagram(nest(pi, k)) == matching_to_diagram(pi)


def test_rotation_examples():
    assert rotate(P("()()")) == P("(())")
    assert rotate(P("(())")) == P("()()")


@given(matchings(1, 6))
def test_rotation_group_action(pi):
    assert rotate(pi, 2 * pi.n) == pi
    assert rotate(rotate(pi), -1) == pi
    # i joined to j in rho(pi) iff i-1 joined to j-1 in pi
    m = 2 * pi.n
    r = rotate(pi)
    for i in range(1, m + 1):
        j = r.partner[i - 1]
        assert pi.partner[(i - 2) % m] == (j - 2) % m + 1


@given(matchings(1, 6))
def test_reflection(pi):
    assert reflect(reflect(pi)) == pi
    assert reflect(rotate(pi)) == rotate(reflect(pi), -1)


def test_tl_examples():
    assert tl_apply(1, P("(())")) == P("()()")
    assert tl_apply(2, P("()()")) == P("(())")
    assert tl_apply(1, P("()()")) == P("()()")
    assert tl_preimage(2, P("(())")) == {P("(())"), P("()()")}
    assert tl_preimage(2, P("()()")) == frozenset()
    assert tl_preimage(1, P("()()")) == {P("()()"), P("(())")}


@given(matchings(1, 5), st.data())
def test_tl_relations_on_matchings(pi, data):
    m = 2 * pi.n
    j = data.draw(st.integers(1, m))
    e = tl_apply(j, pi)
    assert e.has_arch(j, j % m + 1)
    assert tl_apply(j, e) == e
    if m >= 4:
        k = j % m + 1
        assert tl_apply(j, tl_apply(k, e)) == e
    assert pi in tl_preimage(j, e)


def test_tl_index_range():
    with pytest.raises(ValueError):
        tl_apply(5, P("()()"))


def test_add_box_examples():
    assert add_box(P("(())"), 2) == P("()()")
    assert add_box(P("()()"), 2) is None
    assert matching_to_diagram(add_box(P("((()))"), 3)) == (1,)


@given(matchings(1, 6))
def test_add_remove_box(pi):
    for j, bigger in iter_covers(pi):
        assert leq(pi, bigger) and bigger != pi
        assert diagram_size(matching_to_diagram(bigger)) == diagram_size(matching_to_diagram(pi)) + 1
        assert remove_box(bigger, j) == pi


def test_concat_nest():
    assert concat(P("()"), P("()")) == P("()()")
    assert nest(P("()()"), 1) == P("(()())")
    assert fully_nested(3) == P("((()))")
    with pytest.raises(ValueError):
        nest(P("()"), -1)


@given(matchings(0, 6))
def test_format_round_trip(pi):
    for style in ("word", "arches", "json"):
        if pi.n == 0 and style == "arches":
            continue
        assert parse_matching(format_matching(pi, style)) == pi


def test_parse_forms_and_errors():
    assert P("1-4,2-3") == P("(())") == P("[[1,4],[2,3]]")
    assert P("(())").pairs() == ((1, 4), (2, 3))
    for bad in ("(()", ")(", "(x)", "1-3,2-4", "1-2,1-3", "[[1,2],[", "1-"):
        with pytest.raises(MatchingParseError):
            P(bad)
    with pytest.raises(ValueError):
        Matching((2, 1, 4))
