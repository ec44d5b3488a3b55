"""Shared hypothesis strategies."""

from hypothesis import strategies as st

from wheelworks.matchings import all_matchings


def matchings(min_n: int = 0, max_n: int = 5):
    return st.integers(min_n, max_n).flatmap(lambda n: st.sampled_from(all_matchings(n)))


def matchings_of(n: int):
    return st.sampled_from(all_matchings(n))
