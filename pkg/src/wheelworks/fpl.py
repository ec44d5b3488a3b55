"""Fully packed loops on the n x n grid, enumerated by backtracking.

Vertices are ``(r, c)`` with ``r`` counted from the top.  The ``4n``
external edges are indexed cyclically counter-clockwise starting with the
top one on the left side: left side top to bottom, bottom side left to
right, right side bottom to top, top side right to left.  An FPL contains
exactly the external edges with even index; these are the points
``1..2n`` of its link pattern.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import factorial
from pathlib import Path
from typing import Iterator

from wheelworks.config import DEFAULT, Config, check_cap
from wheelworks.errors import VerificationError
from wheelworks.matchings import Matching, _from_partner_unchecked, all_matchings, parse_matching, reflect


def asm(n: int) -> int:
    """Number of n x n alternating sign matrices, ``prod_{i<n} (3i+1)! / (n+i)!``."""
    num = den = 1
    for i in range(n):
        num *= factorial(3 * i + 1)
        den *= factorial(n + i)
    return num // den


def external_slots(n: int) -> list[tuple[int, int]]:
    """Boundary vertex of each external edge, in cyclic counter-clockwise order."""
    slots = [(r, 0) for r in range(n)]
    slots += [(n - 1, c) for c in range(n)]
    slots += [(r, n - 1) for r in range(n - 1, -1, -1)]
    slots += [(0, c) for c in range(n - 1, -1, -1)]
    return slots


def _external_degree(n: int) -> dict[tuple[int, int], list[int]]:
    """Present external edges at each vertex, as labels ``1..2n``."""
    ext: dict[tuple[int, int], list[int]] = {}
    for pos, v in enumerate(external_slots(n)):
        if pos % 2 == 0:
            ext.setdefault(v, []).append(pos // 2 + 1)
    return ext


@dataclass(frozen=True)
class FplConfig:
    n: int
    right: frozenset   # vertices (r, c) joined to (r, c + 1)
    down: frozenset    # vertices (r, c) joined to (r + 1, c)

    def neighbours(self, v: tuple[int, int]) -> list[tuple[int, int]]:
        r, c = v
        out = []
        if v in self.right:
            out.append((r, c + 1))
        if (r, c - 1) in self.right:
            out.append((r, c - 1))
        if v in self.down:
            out.append((r + 1, c))
        if (r - 1, c) in self.down:
            out.append((r - 1, c))
        return out

    def is_valid(self) -> bool:
        ext = _external_degree(self.n)
        return all(len(self.neighbours((r, c))) + len(ext.get((r, c), [])) == 2
                   for r in range(self.n) for c in range(self.n))


def enumerate_fpl(n: int, config: Config = DEFAULT) -> Iterator[FplConfig]:
    """Every FPL of size ``n`` once: vertices row-major, choosing the right and down edges."""
    check_cap("n (fpl)", n, config.caps.fpl_n_max)
    if n < 1:
        raise ValueError("n must be positive")
    need = {v: 2 - len(e) for v, e in _external_degree(n).items()}
    right: set = set()
    down: set = set()
    # up_in[c]: whether the vertex above column c sent a down edge
    up_in = [0] * n

    def rec(idx: int, left_in: int):
        if idx == n * n:
            yield FplConfig(n, frozenset(right), frozenset(down))
            return
        r, c = divmod(idx, n)
        deficit = need.get((r, c), 2) - left_in - up_in[c]
        if deficit < 0:
            return
        can_right = c < n - 1
        can_down = r < n - 1
        saved = up_in[c]
        for go_right in ((0, 1) if can_right else (0,)):
            go_down = deficit - go_right
            if go_down < 0 or go_down > (1 if can_down else 0):
                continue
            if go_right:
                right.add((r, c))
            if go_down:
                down.add((r, c))
            up_in[c] = go_down
            nxt_left = go_right if c < n - 1 else 0
            yield from rec(idx + 1, nxt_left)
            up_in[c] = saved
            right.discard((r, c))
            down.discard((r, c))

    yield from rec(0, 0)


NUMBERINGS = ("ccw", "cw")


def link_pattern(F: FplConfig, numbering: str = "ccw") -> Matching:
    """Matching of the labels ``1..2n`` joined by paths of ``F``.

    ``ccw`` numbers the present external edges counter-clockwise from the top
    one on the left side; ``cw`` is the mirrored numbering from the same edge.
    """
    if numbering not in NUMBERINGS:
        raise ValueError(f"unknown numbering {numbering!r}")
    n = F.n
    ext = _external_degree(n)
    at_vertex: dict[tuple[int, int], list[int]] = ext
    label_vertex = {lab: v for v, labs in ext.items() for lab in labs}
    partner = [0] * (2 * n)
    for start in range(1, 2 * n + 1):
        if partner[start - 1]:
            continue
        v = label_vertex[start]
        labs = at_vertex[v]
        if len(labs) == 2:
            other = labs[0] if labs[1] == start else labs[1]
            partner[start - 1], partner[other - 1] = other, start
            continue
        prev = None
        steps = 0
        while True:
            nbrs = [w for w in F.neighbours(v) if w != prev]
            if len(nbrs) != 1:
                raise VerificationError(f"path from edge {start} breaks at vertex {v}")
            prev, v = v, nbrs[0]
            steps += 1
            if v in at_vertex:
                end = at_vertex[v][0]
                break
            if steps > n * n:
                raise VerificationError("path does not terminate")
        partner[start - 1], partner[end - 1] = end, start
    pi = _from_partner_unchecked(partner)
    if numbering == "cw":
        pi = reflect(pi)
    # re-run the constructor validation (noncrossing, involution)
    return Matching(pi.partner)


@dataclass
class CountTable:
    n: int
    counts: dict

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def to_json(self) -> dict:
        return {"n": self.n,
                "counts": [{"pattern": pi.word(), "count": self.counts[pi]} for pi in all_matchings(self.n)]}

    @classmethod
    def from_json(cls, data: dict) -> "CountTable":
        return cls(data["n"], {parse_matching(row["pattern"]): int(row["count"]) for row in data["counts"]})

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def count_by_pattern(n: int, config: Config = DEFAULT, numbering: str = "ccw") -> CountTable:
    counts = {pi: 0 for pi in all_matchings(n)}
    for F in enumerate_fpl(n, config):
        counts[link_pattern(F, numbering)] += 1
    return CountTable(n, counts)


CACHE_VERSION = 1


def cached_count_table(n: int, config: Config = DEFAULT, numbering: str = "ccw") -> CountTable:
    """:func:`count_by_pattern` backed by ``config.cache_dir`` when one is set."""
    if config.cache_dir is None:
        return count_by_pattern(n, config, numbering)
    path = Path(config.cache_dir) / f"fpl-counts-n{n}-{numbering}.json"
    if path.exists():
        try:
            data = json.loads(path.read_text())
            if data.get("format_version") == CACHE_VERSION and data.get("numbering") == numbering:
                return CountTable.from_json(data)
        except (ValueError, KeyError):
            pass
    table = count_by_pattern(n, config, numbering)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps({**table.to_json(), "numbering": numbering, "format_version": CACHE_VERSION}))
    return table
