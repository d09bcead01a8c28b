"""Core r-uniform hypergraph representation.

Conventions used across the package:

* vertices are dense non-negative ints; an edge is a sorted tuple of r
  distinct vertices; the edge list of a normalized graph is sorted and
  duplicate-free,
* a pair is a tuple (u, v) with u < v,
* an edge subset is described by a sequence of indices into ``edges``.

For graphs with fewer than ``BITSET_LIMIT`` vertices each edge also gets a
python-int bitmask, which makes span/intersection checks cheap; above the
limit the sorted tuples are used directly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

MAX_R = 16
BITSET_LIMIT = 4096

Pair = tuple[int, int]
EdgeSubset = Sequence[int]


def normalize_edges(r: int, edges: Iterable[Iterable[int]]) -> tuple[tuple[int, ...], ...]:
    """Sorted, duplicate-free edge tuples; rejects malformed edges."""
    if not 2 <= r <= MAX_R:
        raise ValueError(f"uniformity r={r} outside supported range [2, {MAX_R}]")
    out = set()
    for e in edges:
        t = tuple(sorted(int(v) for v in e))
        if len(t) != r or len(set(t)) != r:
            raise ValueError(f"edge {t} is not a set of {r} distinct vertices")
        if t[0] < 0:
            raise ValueError(f"edge {t} has a negative vertex")
        out.add(t)
    return tuple(sorted(out))


@dataclass(frozen=True)
class Hypergraph:
    """Immutable r-uniform hypergraph on vertices [0, n)."""

    r: int
    n: int
    edges: tuple[tuple[int, ...], ...]
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @classmethod
    def from_edges(cls, r: int, edges: Iterable[Iterable[int]], n: int | None = None) -> "Hypergraph":
        norm = normalize_edges(r, edges)
        top = 1 + max((e[-1] for e in norm), default=-1)
        if n is None:
            n = top
        elif n < top:
            raise ValueError(f"declared n={n} smaller than max vertex + 1 = {top}")
        return cls(r=r, n=n, edges=norm)

    def __post_init__(self) -> None:
        if not 2 <= self.r <= MAX_R:
            raise ValueError(f"uniformity r={self.r} outside supported range [2, {MAX_R}]")

    @property
    def m(self) -> int:
        return len(self.edges)

    def __len__(self) -> int:
        return len(self.edges)

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        return iter(self.edges)

    # -- derived structures, cached on first use -------------------------------

    def edge_masks(self) -> list[int]:
        """Python-int bitmasks per edge (only for n <= BITSET_LIMIT)."""
        if self.n > BITSET_LIMIT:
            raise ValueError(f"bitmasks disabled for n={self.n} > {BITSET_LIMIT}")
        masks = self._cache.get("masks")
        if masks is None:
            masks = [sum(1 << v for v in e) for e in self.edges]
            self._cache["masks"] = masks
        return masks

    def edge_sets(self) -> list[frozenset[int]]:
        sets_ = self._cache.get("sets")
        if sets_ is None:
            sets_ = [frozenset(e) for e in self.edges]
            self._cache["sets"] = sets_
        return sets_

    def incidence(self) -> dict[int, list[int]]:
        """vertex -> sorted list of incident edge indices."""
        inc = self._cache.get("inc")
        if inc is None:
            inc = {}
            for i, e in enumerate(self.edges):
                for v in e:
                    inc.setdefault(v, []).append(i)
            self._cache["inc"] = inc
        return inc

    def shadow(self) -> frozenset[Pair]:
        """All pairs covered by at least one edge (the 2-shadow)."""
        sh = self._cache.get("shadow")
        if sh is None:
            acc = set()
            for e in self.edges:
                for i in range(len(e)):
                    for j in range(i + 1, len(e)):
                        acc.add((e[i], e[j]))
            sh = frozenset(acc)
            self._cache["shadow"] = sh
        return sh

    def span(self, subset: EdgeSubset) -> int:
        """Number of distinct vertices covered by the given edge indices."""
        verts: set[int] = set()
        for i in subset:
            verts.update(self.edges[i])
        return len(verts)

    def vertices_of(self, subset: EdgeSubset) -> frozenset[int]:
        verts: set[int] = set()
        for i in subset:
            verts.update(self.edges[i])
        return frozenset(verts)

    def subgraph(self, subset: EdgeSubset) -> "Hypergraph":
        """Hypergraph on the same vertex ids, keeping only the given edges."""
        return Hypergraph.from_edges(self.r, [self.edges[i] for i in subset], n=self.n)

    def to_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(edges (m, r) int32, csr_indptr (n+1) int64, csr_eids int32)."""
        arrs = self._cache.get("arrays")
        if arrs is None:
            m = len(self.edges)
            earr = np.zeros((m, self.r), dtype=np.int32)
            for i, e in enumerate(self.edges):
                earr[i] = e
            counts = np.zeros(self.n + 1, dtype=np.int64)
            for e in self.edges:
                for v in e:
                    counts[v + 1] += 1
            indptr = np.cumsum(counts)
            eids = np.zeros(m * self.r, dtype=np.int32)
            cursor = indptr[:-1].copy()
            for i, e in enumerate(self.edges):
                for v in e:
                    eids[cursor[v]] = i
                    cursor[v] += 1
            arrs = (earr, indptr, eids)
            self._cache["arrays"] = arrs
        return arrs


# -- .hg file format -----------------------------------------------------------
#
#   line 1:  r n m
#   then m lines of r space-separated vertex ids; '#' starts a comment.


def dumps_hg(g: Hypergraph, comment: str | None = None) -> str:
    lines = []
    if comment:
        for ln in comment.splitlines():
            lines.append(f"# {ln}")
    lines.append(f"{g.r} {g.n} {g.m}")
    for e in g.edges:
        lines.append(" ".join(str(v) for v in e))
    return "\n".join(lines) + "\n"


def loads_hg(text: str) -> Hypergraph:
    rows = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            rows.append(line)
    if not rows:
        raise ValueError("empty .hg input")
    head = rows[0].split()
    if len(head) != 3:
        raise ValueError(f"bad .hg header {rows[0]!r}, expected 'r n m'")
    r, n, m = (int(x) for x in head)
    if len(rows) - 1 != m:
        raise ValueError(f".hg header declares {m} edges, found {len(rows) - 1}")
    edges = []
    for line in rows[1:]:
        vs = [int(x) for x in line.split()]
        if len(vs) != r:
            raise ValueError(f"edge line {line!r} does not have {r} vertices")
        edges.append(vs)
    return Hypergraph.from_edges(r, edges, n=n)


def write_hg(path: str, g: Hypergraph, comment: str | None = None) -> None:
    with open(path, "w") as fh:
        fh.write(dumps_hg(g, comment))


def read_hg(path: str) -> Hypergraph:
    with open(path) as fh:
        return loads_hg(fh.read())
