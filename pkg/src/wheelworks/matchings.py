"""Noncrossing matchings, their Young diagrams and the Temperley-Lieb set maps.

Points are labelled ``1..2n`` in every public interface.  A matching is
stored as the tuple ``partner`` with ``partner[i - 1]`` the point matched to
point ``i``.  The canonical order on matchings of a fixed size is the
lexicographic order of these tuples.

>>> pi = parse_matching("(()())")
>>> pi.pairs()
((1, 6), (2, 3), (4, 5))
>>> matching_to_diagram(pi)
(1,)
>>> format_matching(rotate(pi))
'()(())'
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Iterable, Iterator, Sequence

from wheelworks.config import DEFAULT
from wheelworks.errors import CapacityError, MatchingParseError

__all__ = [
    "Matching", "catalan", "all_matchings", "matching_index",
    "parse_matching", "format_matching", "matching_to_diagram",
    "diagram_to_matching", "rotate", "tl_apply", "tl_preimage", "add_box",
    "remove_box", "leq", "concat", "nest", "diagonal", "validate_diagram",
    "diagram_size", "fully_nested", "reflect",
]

# a Young diagram, as a weakly decreasing tuple of positive row lengths
Diagram = tuple


@dataclass(frozen=True, order=True)
class Matching:
    partner: tuple[int, ...]

    def __post_init__(self):
        p = self.partner
        m = len(p)
        if m % 2:
            raise ValueError("a matching needs an even number of points")
        for i, j in enumerate(p, start=1):
            if not 1 <= j <= m or j == i or p[j - 1] != i:
                raise ValueError(f"partner array {p} is not a fixed-point-free involution")
        # noncrossing: scanning left to right, right endpoints close the most recent open arch
        stack = []
        for i, j in enumerate(p, start=1):
            if j > i:
                stack.append(i)
            elif not stack or stack.pop() != j:
                raise ValueError(f"partner array {p} has crossing arches")

    @property
    def n(self) -> int:
        return len(self.partner) // 2

    def __len__(self):
        return len(self.partner)

    def pairs(self) -> tuple[tuple[int, int], ...]:
        return tuple((i, j) for i, j in enumerate(self.partner, start=1) if i < j)

    def word(self) -> str:
        return "".join("(" if j > i else ")" for i, j in enumerate(self.partner, start=1))

    def is_left(self, i: int) -> bool:
        return self.partner[i - 1] > i

    def has_arch(self, i: int, j: int) -> bool:
        return self.partner[i - 1] == j

    def __str__(self):
        return self.word()

    def __repr__(self):
        return f"Matching({self.word()!r})"


def _from_word_unchecked(word: str) -> Matching:
    partner = [0] * len(word)
    stack = []
    for i, ch in enumerate(word):
        if ch == "(":
            stack.append(i)
        else:
            j = stack.pop()
            partner[i] = j + 1
            partner[j] = i + 1
    m = object.__new__(Matching)
    object.__setattr__(m, "partner", tuple(partner))
    return m


def _from_partner_unchecked(partner: Sequence[int]) -> Matching:
    m = object.__new__(Matching)
    object.__setattr__(m, "partner", tuple(partner))
    return m


def catalan(n: int) -> int:
    return comb(2 * n, n) // (n + 1)


def _dyck_words(n: int) -> Iterator[str]:
    def rec(prefix: list[str], opened: int, closed: int):
        if closed == n:
            yield "".join(prefix)
            return
        if opened < n:
            prefix.append("(")
            yield from rec(prefix, opened + 1, closed)
            prefix.pop()
        if closed < opened:
            prefix.append(")")
            yield from rec(prefix, opened, closed + 1)
            prefix.pop()

    yield from rec([], 0, 0)


@lru_cache(maxsize=None)
def _all_matchings(n: int) -> tuple[Matching, ...]:
    return tuple(sorted(_from_word_unchecked(w) for w in _dyck_words(n)))


def all_matchings(n: int, limit: int | None = None) -> list[Matching]:
    """All noncrossing matchings of size ``n`` in canonical order."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    limit = DEFAULT.caps.matchings_max if limit is None else limit
    if catalan(n) > limit:
        raise CapacityError(f"C_{n} = {catalan(n)} matchings exceeds the limit {limit}")
    return list(_all_matchings(n))


@lru_cache(maxsize=None)
def matching_index(n: int) -> dict[Matching, int]:
    return {pi: k for k, pi in enumerate(_all_matchings(n))}


def fully_nested(n: int) -> Matching:
    return _from_word_unchecked("(" * n + ")" * n)


_ARCH_RE = re.compile(r"\s*(\d+)\s*-\s*(\d+)\s*")


def parse_matching(text: str) -> Matching:
    """Parse a parenthesis word, an arch list ``"1-4,2-3"`` or JSON ``[[1,4],[2,3]]``."""
    s = text.strip()
    if s.startswith("["):
        try:
            pairs = json.loads(s)
        except json.JSONDecodeError as exc:
            raise MatchingParseError("invalid JSON arch list", exc.pos) from None
        return _from_pairs([tuple(p) for p in pairs], text)
    if s and (s[0].isdigit()):
        pairs = []
        pos = 0
        for chunk in s.split(","):
            m = _ARCH_RE.fullmatch(chunk)
            if not m:
                raise MatchingParseError(f"malformed arch {chunk!r}", pos)
            pairs.append((int(m.group(1)), int(m.group(2))))
            pos += len(chunk) + 1
        return _from_pairs(pairs, text)
    depth = 0
    for pos, ch in enumerate(s):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise MatchingParseError("unmatched ')'", pos)
        else:
            raise MatchingParseError(f"unexpected character {ch!r}", pos)
    if depth:
        raise MatchingParseError("unbalanced word, missing ')'", len(s))
    return _from_word_unchecked(s)


def _from_pairs(pairs: list[tuple], text: str) -> Matching:
    m = 2 * len(pairs)
    partner = [0] * m
    for pos, pair in enumerate(pairs):
        if len(pair) != 2:
            raise MatchingParseError("an arch needs two endpoints", pos)
        a, b = pair
        for x in (a, b):
            if not (isinstance(x, int) and 1 <= x <= m) or partner[x - 1]:
                raise MatchingParseError(f"invalid or repeated point {x!r}", pos)
        if a == b:
            raise MatchingParseError("an arch needs two distinct endpoints", pos)
        partner[a - 1], partner[b - 1] = b, a
    try:
        return Matching(tuple(partner))
    except ValueError as exc:
        raise MatchingParseError(str(exc), 0) from None


def format_matching(pi: Matching, style: str = "word") -> str:
    if style == "word":
        return pi.word()
    if style == "arches":
        return ",".join(f"{i}-{j}" for i, j in pi.pairs())
    if style == "json":
        return json.dumps([list(p) for p in pi.pairs()])
    raise ValueError(f"unknown style {style!r}")


# --- Young diagrams -------------------------------------------------------


def matching_to_diagram(pi: Matching) -> Diagram:
    """Rows (top to bottom) of the region between ``N^n E^n`` and the path of ``pi``.

    Row ``i`` from the top has as many boxes as there are east steps before
    the ``(n - i + 1)``-th north step.
    """
    east_before = []
    e = 0
    for i, j in enumerate(pi.partner, start=1):
        if j > i:
            east_before.append(e)
        else:
            e += 1
    rows = east_before[::-1]
    return tuple(r for r in rows if r)


def validate_diagram(lam: Sequence[int], n: int) -> Diagram:
    lam = tuple(lam)
    for a, b in zip(lam, lam[1:]):
        if a < b:
            raise ValueError(f"diagram {lam} is not weakly decreasing")
    for i, part in enumerate(lam, start=1):
        if part <= 0:
            raise ValueError(f"diagram {lam} has a nonpositive row")
        if part > n - i:
            raise ValueError(f"row {i} of {lam} exceeds n - i = {n - i}")
    return lam


def diagram_size(lam: Sequence[int]) -> int:
    return sum(lam)


def diagram_to_matching(lam: Sequence[int], n: int) -> Matching:
    lam = validate_diagram(lam, n)
    padded = list(lam) + [0] * (n - len(lam))
    word = []
    e = 0
    for k in range(1, n + 1):
        target = padded[n - k]
        word.append(")" * (target - e))
        e = target
        word.append("(")
    word.append(")" * (n - e))
    return _from_word_unchecked("".join(word))


def diagonal(n: int, row: int, col: int) -> int:
    """Diagonal label of the box in ``row``, ``col`` (1-indexed); the first box sits on ``n``."""
    return n + col - row


def leq(sigma: Matching, pi: Matching) -> bool:
    """Containment of Young diagrams, the partial order on matchings of equal size."""
    a, b = matching_to_diagram(sigma), matching_to_diagram(pi)
    return len(a) <= len(b) and all(x <= y for x, y in zip(a, b))


def add_box(sigma: Matching, j: int) -> Matching | None:
    """The matching whose diagram is ``lambda(sigma)`` plus a box on diagonal ``j``, if any.

    A box on diagonal ``j`` turns ``()`` at positions ``j, j+1`` of the
    word into ``)(``, which is possible iff the word does not touch ground
    before position ``j``.
    """
    n = sigma.n
    if not 2 <= j <= 2 * n - 2:
        return None
    w = sigma.word()
    if w[j - 1] != "(" or w[j] != ")":
        return None
    if w[: j - 1].count("(") * 2 == j - 1:
        return None
    return _from_word_unchecked(w[: j - 1] + ")(" + w[j + 1:])


def remove_box(pi: Matching, j: int) -> Matching | None:
    """Inverse of :func:`add_box`."""
    n = pi.n
    if not 2 <= j <= 2 * n - 2:
        return None
    w = pi.word()
    if w[j - 1] != ")" or w[j] != "(":
        return None
    return _from_word_unchecked(w[: j - 1] + "()" + w[j + 1:])


# --- rotation and Temperley-Lieb maps ------------------------------------


def rotate(pi: Matching, times: int = 1) -> Matching:
    """``rho``: points ``i, j`` are joined in ``rho(pi)`` iff ``i-1, j-1`` are joined in ``pi``."""
    m = len(pi.partner)
    if m == 0:
        return pi
    s = times % m
    p = pi.partner
    out = [0] * m
    for i in range(m):
        out[(i + s) % m] = (p[i] - 1 + s) % m + 1
    return _from_partner_unchecked(out)


def reflect(pi: Matching) -> Matching:
    """Mirror image fixing point 1: point ``i`` goes to ``2 - i`` modulo ``2n``."""
    m = len(pi.partner)
    f = [(1 - i) % m + 1 for i in range(1, m + 1)]  # f[i-1] = image of i
    out = [0] * m
    for i in range(m):
        out[f[i] - 1] = f[pi.partner[i] - 1]
    return _from_partner_unchecked(out)


def tl_apply(j: int, pi: Matching) -> Matching:
    """``e_j``: join ``j`` with ``j+1`` (cyclically) and join their former partners."""
    m = len(pi.partner)
    if not 1 <= j <= m:
        raise ValueError(f"index {j} out of range 1..{m}")
    a, b = j, j % m + 1
    p = list(pi.partner)
    pa, pb = p[a - 1], p[b - 1]
    if pa == b:
        return pi
    p[a - 1], p[b - 1] = b, a
    p[pa - 1], p[pb - 1] = pb, pa
    return _from_partner_unchecked(p)


@lru_cache(maxsize=None)
def _preimage_table(n: int, j: int) -> dict[Matching, frozenset[Matching]]:
    table: dict[Matching, set[Matching]] = {}
    for sigma in _all_matchings(n):
        table.setdefault(tl_apply(j, sigma), set()).add(sigma)
    return {k: frozenset(v) for k, v in table.items()}


def tl_preimage(j: int, pi: Matching) -> frozenset[Matching]:
    """All ``sigma`` of the same size with ``e_j(sigma) = pi``."""
    if not 1 <= j <= len(pi.partner):
        raise ValueError(f"index {j} out of range")
    return _preimage_table(pi.n, j).get(pi, frozenset())


def concat(*parts: Matching) -> Matching:
    partner: list[int] = []
    for pi in parts:
        off = len(partner)
        partner.extend(j + off for j in pi.partner)
    return _from_partner_unchecked(partner)


def nest(pi: Matching, m: int) -> Matching:
    """``(pi)_m``: ``pi`` surrounded by ``m`` nested arches."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    return _from_word_unchecked("(" * m + pi.word() + ")" * m)


def iter_covers(sigma: Matching) -> Iterable[tuple[int, Matching]]:
    """Pairs ``(j, pi)`` with ``sigma`` covered by ``pi`` on diagonal ``j``."""
    for j in range(2, 2 * sigma.n - 1):
        pi = add_box(sigma, j)
        if pi is not None:
            yield j, pi
