"""Pair claim sets.

A pair (x, y) is i-claimed by G when some i distinct edges X_1..X_i satisfy
|{x, y} ∪ X_1 ∪ .. ∪ X_i| <= r*i - 2*i + 2.  claim_set() returns every
i in [0, i_max] that is claimed; 0 is always claimed (empty witness).

The search is an exact include/skip branch-and-bound over ALL edges.  Edges
are ordered outward from the pair (overlap with {x, y} first) purely as a
heuristic; restricting the search to witnesses connected to the pair would
be wrong, since a witness may contain components nowhere near the pair.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .hypergraph import Hypergraph, Pair


def claim_budget(r: int, i: int) -> int:
    """Vertex budget r*i - 2*i + 2 for an i-edge witness."""
    return r * i - 2 * i + 2


@dataclass(frozen=True)
class ClaimQuery:
    pair: Pair
    i_max: int = 8


@dataclass(frozen=True)
class ClaimSet:
    pair: Pair
    i_max: int
    values: frozenset[int]

    def __contains__(self, i: int) -> bool:
        return i in self.values

    def min_positive(self) -> int | None:
        pos = [i for i in self.values if i > 0]
        return min(pos) if pos else None


def claim_set(g: Hypergraph, pair: Pair, i_max: int = 8) -> frozenset[int]:
    """All i in [0, i_max] such that g i-claims the pair."""
    x, y = pair
    if x == y:
        raise ValueError(f"degenerate pair {pair}")
    if i_max < 0:
        raise ValueError("i_max must be >= 0")
    r = g.r
    m = g.m
    depth_cap = min(i_max, m)
    claimed = [False] * (i_max + 1)
    claimed[0] = True
    if depth_cap == 0:
        return frozenset({0})

    base = frozenset((x, y))
    esets = g.edge_sets()
    order = sorted(range(m), key=lambda i: (-len(esets[i] & base), i))
    budgets = [claim_budget(r, i) for i in range(i_max + 1)]
    max_budget = budgets[depth_cap]
    # minimal |{x,y} ∪ union| seen per witness size
    best = [float("inf")] * (depth_cap + 1)

    def dfs(pos: int, depth: int, union: frozenset[int]) -> None:
        size = len(union)
        if size < best[depth]:
            best[depth] = size
        if depth == depth_cap or pos == m:
            return
        if size > max_budget:
            return  # unions only grow; no witness size can come back under budget
        for j in range(pos, m):
            e = esets[order[j]]
            dfs(j + 1, depth + 1, union | e)

    dfs(0, 0, base)
    for i in range(1, depth_cap + 1):
        if best[i] <= budgets[i]:
            claimed[i] = True
    return frozenset(i for i, ok in enumerate(claimed) if ok)


def claimed_pairs(
    g: Hypergraph,
    require: Iterable[int],
    avoid: Iterable[int] = (),
    pairs: Iterable[Pair] | None = None,
) -> frozenset[Pair]:
    """Pairs xy with require ⊆ C(xy) and avoid ∩ C(xy) = ∅.

    With require={1} this is the 2-shadow; require={2}, avoid={1} gives the
    2-but-not-1-claimed pairs, and so on.  Defaults to all pairs over the
    vertices of g.
    """
    req = frozenset(require)
    avd = frozenset(avoid)
    if not req and not avd:
        raise ValueError("at least one of require/avoid must be non-empty")
    i_max = max(req | avd)
    if pairs is None:
        verts = sorted({v for e in g.edges for v in e})
        pairs = [
            (verts[a], verts[b])
            for a in range(len(verts))
            for b in range(a + 1, len(verts))
        ]
    out = set()
    for p in pairs:
        cs = claim_set(g, p, i_max=i_max)
        if req <= cs and not (avd & cs):
            out.add(p)
    return frozenset(out)


def pairs_leq_t(g: Hypergraph, t: int, pairs: Iterable[Pair] | None = None) -> frozenset[Pair]:
    """Pairs claimed at some level in [1, t] (the P_{<=t} set).

    Exact per-pair search; suitable for graphs up to a few thousand edges.
    The construction pipeline uses the scan-based marking in
    bes.construction for its large instances.
    """
    if t < 1:
        return frozenset()
    if pairs is None:
        verts = sorted({v for e in g.edges for v in e})
        pairs = [
            (verts[a], verts[b])
            for a in range(len(verts))
            for b in range(a + 1, len(verts))
        ]
    out = set()
    for p in pairs:
        cs = claim_set(g, p, i_max=t)
        if any(i in cs for i in range(1, t + 1)):
            out.add(p)
    return frozenset(out)


class TightnessError(ValueError):
    """Raised when claim_levels_tight meets a witness below the span floor."""


def claim_levels_tight(g: Hypergraph, i_max: int = 6) -> dict[Pair, int]:
    """pair -> bitmask of claimed levels (bit i set iff i in C(pair)).

    Exact only for graphs in which every j <= i_max edges span at least
    claim_budget(r, j) vertices (every cluster handled by the merging and
    weighing machinery qualifies; i_max must stay <= 7 for the underlying
    argument).  Under that floor a witness always has exactly one connected
    component and contains both pair vertices, so connected enumeration with
    per-size span equality is complete.  Connected witnesses below the floor
    raise TightnessError instead of returning wrong answers.
    """
    if not 1 <= i_max <= 7:
        raise ValueError("claim_levels_tight supports i_max in [1, 7]")
    r = g.r
    m = g.m
    esets = g.edge_sets()
    inc = g.incidence()
    budgets = [claim_budget(r, i) for i in range(i_max + 1)]
    span_cap = budgets[i_max]
    marks: dict[Pair, int] = {}

    def mark(verts: frozenset[int], bit: int) -> None:
        vs = sorted(verts)
        for a in range(len(vs)):
            for b in range(a + 1, len(vs)):
                p = (vs[a], vs[b])
                marks[p] = marks.get(p, 0) | (1 << bit)

    def grow(subset: frozenset[int], verts: frozenset[int], banned: frozenset[int], seed: int) -> None:
        size = len(subset)
        span = len(verts)
        if span < budgets[size]:
            raise TightnessError(
                f"{size} edges on {span} vertices (below the {budgets[size]}-vertex floor): {sorted(subset)}"
            )
        if span == budgets[size]:
            mark(verts, size)
        if size == i_max or span > span_cap:
            return
        cand = sorted(
            {
                e
                for v in verts
                for e in inc.get(v, ())
                if e > seed and e not in subset and e not in banned
            }
        )
        local: set[int] = set()
        for f in cand:
            grow(subset | {f}, verts | esets[f], banned | frozenset(local), seed)
            local.add(f)

    for seed in range(m):
        grow(frozenset({seed}), esets[seed], frozenset(), seed)
    return marks


def sumset_contains(claim_sets: Iterable[Iterable[int]], k: int) -> bool:
    """Whether the sum-set of the given claim sets contains k.

    The sum-set of C_1..C_s is {c_1 + .. + c_s : c_i in C_i}; every claim
    set contains 0, so this asks whether some sub-collection of positive
    claims sums to exactly k.  Used as a consistency assertion: for a graph
    with no k edges on r*k-2*k+2 vertices, the sum over edge-disjoint
    subgraphs never contains k.
    """
    reach = 1  # bitmask of reachable sums, bit 0 set
    limit = (1 << (k + 1)) - 1
    for cs in claim_sets:
        nxt = 0
        for a in set(cs):
            if 0 <= a <= k:
                nxt |= reach << a
        reach = nxt & limit
        if reach == 0:
            return False
    return bool((reach >> k) & 1)
