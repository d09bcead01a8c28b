"""Cluster partitions: two-share components and their claim-driven closure.

Edges sharing two or more vertices are clustered together; in a graph free
of the crowded hierarchy every such component is a tree (each edge after
the first glues to two vertices inside one earlier edge and brings r-2
fresh ones).  Components are then merged pairwise whenever one component
covers a pair that another 2-claims without 1-claiming it; iterating to a
fixed point yields the second-stage partition.  The fixed point is
order-independent for qualifying inputs, but that is a theorem about the
inputs, not the algorithm, so the selection order stays pluggable and the
independence is exercised by tests instead of assumed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from .claims import claim_levels_tight
from .hypergraph import Hypergraph, Pair


@dataclass(frozen=True)
class Partition:
    """Disjoint edge-id groups, each sorted, ordered by smallest member."""

    parts: tuple[tuple[int, ...], ...]

    @classmethod
    def from_groups(cls, groups: Iterable[Iterable[int]]) -> "Partition":
        parts = sorted(tuple(sorted(set(gp))) for gp in groups if gp)
        flat = [e for p in parts for e in p]
        if len(flat) != len(set(flat)):
            raise ValueError("groups overlap")
        return cls(tuple(parts))

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def part_of(self, edge: int) -> int:
        for i, p in enumerate(self.parts):
            if edge in p:
                return i
        raise KeyError(edge)

    def sizes(self) -> tuple[int, ...]:
        return tuple(len(p) for p in self.parts)


class MergeEvent(NamedTuple):
    """One closure step: cover_part supplied the covered pair, claim_part
    2-claimed it.  Parts are named by their smallest edge id at the time."""

    cover_part: int
    claim_part: int
    pair: Pair


@dataclass(frozen=True)
class MergeResult:
    initial: Partition
    final: Partition
    events: tuple[MergeEvent, ...]

    def composition_of(self, part_index: int) -> tuple[int, ...]:
        """Sizes of the initial components inside one final part, largest
        first."""
        members = set(self.final.parts[part_index])
        sizes = [
            len(p) for p in self.initial.parts if members.issuperset(p)
        ]
        if sum(sizes) != len(members):
            raise ValueError("final part does not align with initial parts")
        return tuple(sorted(sizes, reverse=True))


def two_share_components(g: Hypergraph) -> Partition:
    """Union-find over edges joined whenever they share >= 2 vertices."""
    m = g.m
    parent = list(range(m))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    esets = g.edge_sets()
    # pair -> first edge seen covering it; a repeat means a 2-share
    seen: dict[Pair, int] = {}
    for i, e in enumerate(g.edges):
        for a in range(len(e)):
            for b in range(a + 1, len(e)):
                p = (e[a], e[b])
                j = seen.setdefault(p, i)
                if j != i:
                    ra, rb = find(i), find(j)
                    if ra != rb:
                        parent[ra] = rb
    groups: dict[int, list[int]] = {}
    for i in range(m):
        groups.setdefault(find(i), []).append(i)
    part = Partition.from_groups(groups.values())
    # cross-check the pair-table route against direct comparison
    for i in range(m):
        for j in range(i + 1, m):
            joined = find(i) == find(j)
            if len(esets[i] & esets[j]) >= 2 and not joined:
                raise AssertionError("two-share union-find missed a pair")
    return part


def part_shadow(g: Hypergraph, part: Sequence[int]) -> frozenset[Pair]:
    acc: set[Pair] = set()
    for e in part:
        vs = g.edges[e]
        for a in range(len(vs)):
            for b in range(a + 1, len(vs)):
                acc.add((vs[a], vs[b]))
    return frozenset(acc)


def two_but_not_one_claimed(g: Hypergraph, part: Sequence[int]) -> frozenset[Pair]:
    """Pairs the part 2-claims but does not cover."""
    sub = g.subgraph(part)
    marks = claim_levels_tight(sub, i_max=2)
    return frozenset(
        p for p, mask in marks.items()
        if (mask >> 2) & 1 and not (mask >> 1) & 1
    )


def mergeable_pairs(
    g: Hypergraph,
    cover_part: Sequence[int],
    claim_part: Sequence[int],
    claim_cache: dict | None = None,
) -> frozenset[Pair]:
    """Pairs covered by cover_part that claim_part (2 but not 1)-claims."""
    key = tuple(claim_part)
    if claim_cache is not None and key in claim_cache:
        target = claim_cache[key]
    else:
        target = two_but_not_one_claimed(g, claim_part)
        if claim_cache is not None:
            claim_cache[key] = target
    if not target:
        return frozenset()
    return part_shadow(g, cover_part) & target


def merge_clusters(g: Hypergraph, order: str = "lex", rng=None) -> MergeResult:
    """Close the two-share partition under pair-claim merging.

    order="lex" always merges the candidate with the smallest
    (cover part, claim part, pair) key; order="rng" picks uniformly using
    the provided numpy Generator.  The resulting partition should not
    depend on the choice for inputs the theory covers.
    """
    if order not in ("lex", "rng"):
        raise ValueError(f"unknown order {order!r}")
    if order == "rng" and rng is None:
        raise ValueError("order='rng' needs a numpy Generator")
    initial = two_share_components(g)
    parts: list[tuple[int, ...]] = list(initial.parts)
    events: list[MergeEvent] = []
    claim_cache: dict = {}

    while True:
        cands: list[tuple[int, int, Pair]] = []
        for i, F in enumerate(parts):
            for j, H in enumerate(parts):
                if i == j:
                    continue
                hits = mergeable_pairs(g, F, H, claim_cache)
                for pr in hits:
                    cands.append((i, j, pr))
        if not cands:
            break
        if order == "lex":
            i, j, pr = min(
                cands, key=lambda c: (parts[c[0]][0], parts[c[1]][0], c[2]))
        else:
            i, j, pr = cands[int(rng.integers(0, len(cands)))]
        events.append(MergeEvent(parts[i][0], parts[j][0], pr))
        merged = tuple(sorted(parts[i] + parts[j]))
        keep = [p for k, p in enumerate(parts) if k not in (i, j)]
        keep.append(merged)
        parts = sorted(keep)

    return MergeResult(
        initial=initial,
        final=Partition.from_groups(parts),
        events=tuple(events),
    )


def is_tree(g: Hypergraph, part: Sequence[int] | None = None) -> bool:
    """Whether the edges form a tree: two-share connected, span exactly
    (r-2)m + 2, and no sub-collection below the span floor."""
    edges = list(range(g.m)) if part is None else sorted(part)
    if not edges:
        return False
    if len(edges) == 1:
        return True
    r = g.r
    esets = g.edge_sets()
    seen = {edges[0]}
    frontier = [edges[0]]
    while frontier:
        a = frontier.pop()
        for b in edges:
            if b not in seen and len(esets[a] & esets[b]) >= 2:
                seen.add(b)
                frontier.append(b)
    if seen != set(edges):
        return False
    j = len(edges)
    if g.span(edges) != (r - 2) * j + 2:
        return False
    # subsets must stay on or above the floor
    sub = g.subgraph(edges)
    from .freeness import find_any_level

    levels = {t: (r - 2) * t + 1 for t in range(2, j + 1)}
    return find_any_level(sub, levels) is None


def flexible_edges(g: Hypergraph, part: Sequence[int]) -> tuple[int, ...]:
    """Edges of the part owning all r-2 vertices private to themselves."""
    part = sorted(part)
    counts: dict[int, int] = {}
    for e in part:
        for v in g.edges[e]:
            counts[v] = counts.get(v, 0) + 1
    out = []
    for e in part:
        priv = sum(1 for v in g.edges[e] if counts[v] == 1)
        if priv >= g.r - 2:
            out.append(e)
    return tuple(out)


def trimming_order(g: Hypergraph, part: Sequence[int]) -> tuple[int, ...]:
    """Edge order in which every prefix is itself a tree.

    For a tree, any two-share-connected order qualifies: the span
    increments are at most r-2 per step and must total (r-2)(m-1), so
    each step glues on exactly two vertices.  Starts from the smallest
    edge id and always appends the smallest connectable edge.
    """
    part = sorted(part)
    if not part:
        return ()
    esets = g.edge_sets()
    order = [part[0]]
    rest = set(part[1:])
    while rest:
        nxt = None
        for b in sorted(rest):
            if any(len(esets[a] & esets[b]) >= 2 for a in order):
                nxt = b
                break
        if nxt is None:
            raise ValueError("part is not two-share connected")
        order.append(nxt)
        rest.remove(nxt)
    return tuple(order)
