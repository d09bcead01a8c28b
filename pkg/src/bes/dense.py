"""Exact detection of dense subsets in a family of 2-paths.

A set of i paths (cherries) over a base graph is dense when its vertex
span is at most i+1, and minimal when every proper subset is sparse.
Enumerating these sets by growing path subsets explodes on overlapping
families, so this module instead classifies the possible shapes of a
minimal dense set and searches for each shape directly.

The classification holds whenever the union graph of the family (all
center-to-end edges) has girth at least 6, which the caller's base graph
guarantees and which is re-verified here.  Writing U for the span of a
minimal dense i-set and G for the union graph restricted to U:

* |U| = i+1 exactly, and removing any one path still covers all of U, so
  every vertex of U lies in at least two paths.
* G is connected with cyclomatic number c <= 2 (girth 6 allows no two
  independent short cycles on at most 9 vertices).
* c = 0 forces a single shared center: the set is a chordless cycle in
  that center's end-pair graph.  (In a tree-shaped union a deepest
  branching vertex would need a cycle among its leaf children.)
* c = 1 forces a base cycle of length 6..9 where exactly one cycle
  vertex centers no path and every other cycle vertex z carries a simple
  "detour" path between its two cycle neighbours in z's end-pair graph;
  detour interior vertices are private to z.
* c = 2 forces a theta skeleton, and girth plus the 9-vertex cap leave
  only theta(3,3,3) and theta(4,4,2), with at most one extra interior or
  pendant vertex in the first case and none in the second.

Each shape search emits candidate vertex spans; a span U is accepted
exactly when the family has at least |U|-1 paths inside U, which is a
complete and assumption-free test.  Families whose union graph has a
cycle shorter than 6 fall back to plain subset enumeration, which is
exact but only viable for small families.
"""

from __future__ import annotations

from collections import deque
from itertools import combinations
from typing import Iterable, Mapping, NamedTuple, Sequence

import numpy as np

from . import _kernels

Triple = tuple[int, int, int]

# ---------------------------------------------------------------------------
# basic predicates

BRUTE_LIMIT = 26


def span_of(paths: Sequence[Triple], idxs: Iterable[int]) -> set[int]:
    acc: set[int] = set()
    for i in idxs:
        acc.update(paths[i])
    return acc


def is_dense(paths: Sequence[Triple], idxs: Sequence[int]) -> bool:
    return len(span_of(paths, idxs)) <= len(idxs) + 1


def is_minimal_dense(paths: Sequence[Triple], idxs: Sequence[int]) -> bool:
    if not is_dense(paths, idxs):
        return False
    for size in range(2, len(idxs)):
        for sub in combinations(idxs, size):
            if is_dense(paths, sub):
                return False
    return True


def brute_minimal_dense(
    paths: Sequence[Triple], i_max: int = 8
) -> list[tuple[int, ...]]:
    """Exact minimal dense sets by subset enumeration; small families only."""
    n = len(paths)
    if n > BRUTE_LIMIT:
        raise ValueError(
            f"brute enumeration is limited to {BRUTE_LIMIT} paths, got {n}")
    found: list[tuple[int, ...]] = []
    for size in range(2, min(i_max, n) + 1):
        for sub in combinations(range(n), size):
            ss = set(sub)
            if any(set(f) <= ss for f in found):
                continue
            if is_dense(paths, sub):
                found.append(sub)
    return found


# ---------------------------------------------------------------------------
# union graph utilities


def union_adjacency(paths: Sequence[Triple]) -> dict[int, set[int]]:
    adj: dict[int, set[int]] = {}
    for z, x, y in paths:
        adj.setdefault(z, set()).update((x, y))
        adj.setdefault(x, set()).add(z)
        adj.setdefault(y, set()).add(z)
    return adj


def short_cycle_exists(adj: Mapping[int, set[int]], floor: int = 6) -> bool:
    """True if the graph has a cycle of length below floor (floor <= 6)."""
    if floor > 6:
        raise ValueError("only girth floors up to 6 are supported")
    for v, l1 in adj.items():
        # edge inside the first neighbourhood closes a triangle
        for a in l1:
            if adj[a] & l1:
                return True
        seen: dict[int, int] = {}
        l2: set[int] = set()
        for a in l1:
            for w in adj[a]:
                if w == v or w in l1:
                    continue
                if w in seen and seen[w] != a:
                    return True  # two parents: a 4-cycle through v
                seen.setdefault(w, a)
                l2.add(w)
        # edge inside the second shell closes a cycle of length <= 5
        for w in l2:
            if adj[w] & l2:
                return True
    return False


def bfs_distances(
    adj: Mapping[int, set[int]], limit: int
) -> dict[int, dict[int, int]]:
    """Per-vertex BFS distances, truncated beyond limit."""
    out: dict[int, dict[int, int]] = {}
    for s in adj:
        dist = {s: 0}
        queue = deque([s])
        while queue:
            v = queue.popleft()
            d = dist[v]
            if d == limit:
                continue
            for w in adj[v]:
                if w not in dist:
                    dist[w] = d + 1
                    queue.append(w)
        out[s] = dist
    return out


# ---------------------------------------------------------------------------
# per-center structure


def paths_by_center(
    paths: Sequence[Triple],
) -> dict[int, list[tuple[int, int, int]]]:
    """Map center -> [(end, end, path index)]."""
    by: dict[int, list[tuple[int, int, int]]] = {}
    for i, (z, x, y) in enumerate(paths):
        by.setdefault(z, []).append((x, y, i))
    return by


def duplicate_witnesses(paths: Sequence[Triple]) -> list[tuple[int, ...]]:
    """Pairs of paths on the same vertex triple: dense with span 3."""
    groups: dict[tuple[int, int, int], list[int]] = {}
    for i, t in enumerate(paths):
        groups.setdefault(tuple(sorted(t)), []).append(i)
    out = []
    for members in groups.values():
        out.extend(tuple(pr) for pr in combinations(members, 2))
    return sorted(out)


def cycle_witnesses(
    paths: Sequence[Triple], i_max: int = 8, induced_only: bool = False
) -> list[tuple[int, ...]]:
    """Single-center minimal dense sets: cycles of the end-pair graphs.

    A set of k same-center paths is dense exactly when its end-pair graph
    has a cycle, and minimal exactly when the set's own edges form one
    simple cycle; whether the family holds chords for that cycle is
    irrelevant, since subsets never include them.  With induced_only
    chordful cycles are skipped, which is cheaper and still finds some
    cycle whenever one of length at most i_max exists (the shortest is
    chordless), so it suits repeated pruning but not full enumeration.
    """
    if i_max < 3:
        return []
    out: list[tuple[int, ...]] = []
    for z, items in paths_by_center(paths).items():
        nbr: dict[int, set[int]] = {}
        eidx: dict[tuple[int, int], int] = {}
        for x, y, i in items:
            if (x, y) in eidx:
                continue  # duplicate pair, reported by duplicate_witnesses
            eidx[(x, y)] = eidx[(y, x)] = i
            nbr.setdefault(x, set()).add(y)
            nbr.setdefault(y, set()).add(x)
        for a in sorted(nbr):
            # canonical: a is the smallest cycle vertex, and the cycle is
            # walked from a toward its smaller neighbour on the cycle
            stack = [(a, b) for b in nbr[a] if b > a]
            while stack:
                path = stack.pop()
                tip = path[-1]
                interior = path[1:-1]
                for w in nbr[tip]:
                    if w <= a or w in path:
                        continue
                    if induced_only and any(w in nbr[u] for u in interior):
                        continue  # chord back into the walk
                    closes = a in nbr[w]
                    if closes and path[1] < w:
                        cyc = path + (w,)
                        out.append(tuple(sorted(
                            eidx[(cyc[j - 1], cyc[j])]
                            for j in range(len(cyc)))))
                    if closes and induced_only:
                        continue
                    if len(path) + 2 <= i_max:
                        stack.append(path + (w,))
    return sorted(set(out))


# ---------------------------------------------------------------------------
# detour arcs: building blocks for ring and theta spans


class Arc(NamedTuple):
    """A simple path src..dst inside one center's end-pair graph.

    cost counts interior vertices (private to the arc), idxs the family
    paths supplying its edges.  Both orientations are materialized.
    """

    src: int
    ctr: int
    dst: int
    cost: int
    inner: tuple[int, ...]
    idxs: tuple[int, ...]


def detour_arcs(paths: Sequence[Triple], max_cost: int) -> list[Arc]:
    arcs: list[Arc] = []
    for z, items in paths_by_center(paths).items():
        nbr: dict[int, list[int]] = {}
        eidx: dict[tuple[int, int], int] = {}
        for x, y, i in items:
            if (x, y) in eidx:
                continue
            eidx[(x, y)] = eidx[(y, x)] = i
            nbr.setdefault(x, []).append(y)
            nbr.setdefault(y, []).append(x)
        for s in nbr:
            stack: list[tuple[int, ...]] = [(s,)]
            while stack:
                walk = stack.pop()
                tip = walk[-1]
                if len(walk) >= 2:
                    arcs.append(Arc(
                        s, z, tip, len(walk) - 2, walk[1:-1],
                        tuple(eidx[(walk[j - 1], walk[j])]
                              for j in range(1, len(walk)))))
                if len(walk) < max_cost + 2:
                    for w in nbr[tip]:
                        if w not in walk:
                            stack.append(walk + (w,))
    return arcs


def _pool_tables(
    paths: Sequence[Triple],
) -> tuple[dict[int, dict[int, int]], dict[int, list[int]]]:
    """Per-center end-vertex degrees, and centers reachable from each end.

    pool_deg[z][v] is v's degree in z's end-pair graph; centers_at[v]
    lists the centers whose end-pair graph contains v.
    """
    pool_deg: dict[int, dict[int, int]] = {}
    for z, items in paths_by_center(paths).items():
        deg: dict[int, int] = {}
        seen: set[tuple[int, int]] = set()
        for x, y, _ in items:
            if (x, y) in seen or (y, x) in seen:
                continue
            seen.add((x, y))
            deg[x] = deg.get(x, 0) + 1
            deg[y] = deg.get(y, 0) + 1
        pool_deg[z] = deg
    centers_at: dict[int, list[int]] = {}
    for z, deg in pool_deg.items():
        for v in deg:
            centers_at.setdefault(v, []).append(z)
    return pool_deg, centers_at


# ---------------------------------------------------------------------------
# ring spans: one base cycle, length 6..9, with detour interiors


def ring_candidate_spans(
    paths: Sequence[Triple],
    i_max: int = 8,
    arcs: Sequence[Arc] | None = None,
    dist: Mapping[int, Mapping[int, int]] | None = None,
) -> set[frozenset[int]]:
    """Vertex spans of possible ring witnesses.

    A ring witness walks a base cycle v0, v1, .., v(l-1) where every vi
    except v0 centers a detour arc from its predecessor to its successor.
    Chains of linked arcs (next.src == cur.ctr, next.ctr == cur.dst) are
    grown from each candidate v0 and closed back at v0.  Distance
    pruning: a chain of k arcs carrying total detour cost c can only
    close into a cycle of length min(lmax, i_max - c) or shorter, so the
    walk head must sit within that bound minus k steps of v0, measured
    on distances computed before any removals; stale distances only
    understate true ones and never prune a closable chain.  The chase
    runs in a compiled kernel when one is active and falls back to a
    pure bitmask walk otherwise; both produce identical span sets.
    """
    if i_max < 5:
        return set()
    lmax = min(8, i_max)  # arcs per chain; cycle length is one more
    if arcs is None:
        arcs = detour_arcs(paths, i_max - 5)
    if not arcs:
        return set()
    if dist is None:
        dist = bfs_distances(union_adjacency(paths), lmax)
    # pool keys multiply by nv, so nv must cover centers as well as ends
    nv = 1
    for a in arcs:
        hi = a.src if a.src > a.ctr else a.ctr
        if a.dst > hi:
            hi = a.dst
        if hi >= nv:
            nv = hi + 1
    if _kernels.USE_NUMBA and nv <= 2048:
        return _ring_spans_kernel(arcs, dist, nv, i_max, lmax)
    return _ring_spans_py(arcs, dist, nv, i_max, lmax)


def _ring_spans_py(
    arcs: Sequence[Arc],
    dist: Mapping[int, Mapping[int, int]],
    nv: int,
    i_max: int,
    lmax: int,
) -> set[frozenset[int]]:
    # chain state lives in integer bitmasks; pool records carry the arc's
    # occupied vertices (center plus interior) premasked
    by_key: dict[int, list[tuple[int, int, int, int]]] = {}
    by_src: dict[int, list[tuple[int, int, int, int]]] = {}
    for a in arcs:
        m = 1 << a.ctr
        for w in a.inner:
            m |= 1 << w
        by_key.setdefault(a.src * nv + a.ctr, []).append(
            (m, a.dst, 1 << a.dst, a.cost))
        by_src.setdefault(a.src, []).append((m, a.ctr, a.dst, a.cost))
    big = lmax + 1
    found: set[int] = set()
    by_key_get = by_key.get
    for v0, pool0 in by_src.items():
        d0 = [big] * nv
        for w, d in dist.get(v0, {}).items():
            if w < nv:
                d0[w] = d
        v0bit = 1 << v0
        stack = []
        for m0, c0, dst0, cost0 in pool0:
            bound0 = i_max - cost0
            if bound0 > lmax:
                bound0 = lmax
            if d0[dst0] <= bound0 - 1:
                stack.append((c0, dst0, 1, v0bit | m0, cost0))
        while stack:
            ka, kb, k, used, cost = stack.pop()
            pool = by_key_get(ka * nv + kb)
            if not pool:
                continue
            k1 = k + 1
            budget_close = i_max - k - 1
            budget_push = i_max - k - 2
            can_push = k1 <= lmax - 1
            for m, dstv, dstbit, c in pool:
                cost1 = cost + c
                if cost1 > budget_close or used & m:
                    continue
                if dstv == v0:
                    if k1 >= 5:
                        found.add(used | m)
                    continue
                if not can_push or cost1 > budget_push:
                    continue
                grown = used | m
                if grown & dstbit:
                    continue
                bound = i_max - cost1
                if bound > lmax:
                    bound = lmax
                if d0[dstv] > bound - k1:
                    continue
                stack.append((kb, dstv, k1, grown, cost1))
    return {_mask_set(mask) for mask in found}


def _ring_spans_kernel(
    arcs: Sequence[Arc],
    dist: Mapping[int, Mapping[int, int]],
    nv: int,
    i_max: int,
    lmax: int,
) -> set[frozenset[int]]:
    na = len(arcs)
    a_src = np.empty(na, dtype=np.int32)
    a_ctr = np.empty(na, dtype=np.int32)
    a_dst = np.empty(na, dtype=np.int32)
    a_cost = np.empty(na, dtype=np.int32)
    occ_ptr = np.zeros(na + 1, dtype=np.int64)
    for i, a in enumerate(arcs):
        a_src[i] = a.src
        a_ctr[i] = a.ctr
        a_dst[i] = a.dst
        a_cost[i] = a.cost
        occ_ptr[i + 1] = occ_ptr[i] + 1 + len(a.inner)
    occ_flat = np.empty(int(occ_ptr[na]), dtype=np.int32)
    for i, a in enumerate(arcs):
        base = int(occ_ptr[i])
        occ_flat[base] = a.ctr
        for j, w in enumerate(a.inner):
            occ_flat[base + 1 + j] = w
    big = lmax + 1
    dmat = np.full((nv, nv), big, dtype=np.int16)
    for v, row in dist.items():
        if v >= nv:
            continue
        dv = dmat[v]
        for w, d in row.items():
            if w < nv:
                dv[w] = d if d < big else big
    spans = _kernels.ring_scan(a_src, a_ctr, a_dst, a_cost,
                               occ_ptr, occ_flat, nv, dmat, i_max)
    return {frozenset(t) for t in spans}


def _mask_set(mask: int) -> frozenset[int]:
    verts = []
    while mask:
        low = mask & -mask
        verts.append(low.bit_length() - 1)
        mask ^= low
    return frozenset(verts)


# ---------------------------------------------------------------------------
# theta spans: two hubs joined by three disjoint branches


def _is_bipartite(adj: Mapping[int, set[int]]) -> bool:
    color: dict[int, int] = {}
    for s in adj:
        if s in color:
            continue
        color[s] = 0
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for w in adj[v]:
                if w not in color:
                    color[w] = color[v] ^ 1
                    queue.append(w)
                elif color[w] == color[v]:
                    return False
    return True


def theta_candidate_spans(
    paths: Sequence[Triple],
    i_max: int = 8,
    arcs: Sequence[Arc] | None = None,
) -> set[frozenset[int]]:
    """Vertex spans of possible theta witnesses.

    Up to 9 span vertices the only theta skeletons with girth at least 6
    are theta(3,3,3) on 8 vertices, with room for one interior or hub
    tree vertex, and theta(4,4,2) and theta(4,3,3) on 9 vertices with no
    room at all.  theta(4,3,3) contains 7-cycles, so it is skipped when
    the union graph is bipartite.  Branches between a hub pair are
    collected from detour arcs and end-pair pools; every split of a
    branch's interior vertices into centered and uncentered ones is
    covered because an uncentered interior vertex forces its hub-side
    edge into the hub's pool and two adjacent interior vertices are
    never both uncentered (nothing could cover the edge between them).
    Branch combinations are assembled in a compiled kernel when one is
    active and in a pure bitmask pass otherwise; both produce identical
    span sets.
    """
    if i_max < 7:
        return set()
    if arcs is None:
        arcs = detour_arcs(paths, i_max - 7)
    if _kernels.USE_NUMBA:
        return _theta_spans_kernel(paths, i_max, arcs)
    return _theta_spans_py(paths, i_max, arcs)


def _theta_hub_pairs(
    paths: Sequence[Triple],
    i_max: int,
    arcs: Sequence[Arc],
):
    """Branch records per unordered hub pair, in span-building form.

    Yields (h1, h2, items3, recs4, mids, w333, w442, w433): deduped
    3-branch records as (vertex mask, min cost), 4-branch vertex masks,
    middle vertices for the two-edge branch, and the layout flags worth
    trying between this pair.  Pairs with no viable layout are skipped.
    """
    b333 = i_max - 7
    # branch records are integer bitmasks; arc interiors are premasked
    by_sc: dict[tuple[int, int], list[tuple[int, int, int]]] = {}
    by_src: dict[int, list[tuple[int, int, int, int]]] = {}
    by_sc0: dict[tuple[int, int], list[int]] = {}
    by_src0: dict[int, list[tuple[int, int]]] = {}
    for a in arcs:
        if a.cost > b333:
            continue
        im = 0
        for w in a.inner:
            im |= 1 << w
        by_sc.setdefault((a.src, a.ctr), []).append((a.dst, a.cost, im))
        by_src.setdefault(a.src, []).append((a.ctr, a.dst, a.cost, im))
        if a.cost == 0:
            by_sc0.setdefault((a.src, a.ctr), []).append(a.dst)
            by_src0.setdefault(a.src, []).append((a.ctr, a.dst))
    pool_deg, centers_at = _pool_tables(paths)
    adj = union_adjacency(paths)
    do_nine = i_max >= 8
    do_433 = do_nine and not _is_bipartite(adj)

    for h1 in sorted(adj):
        # branch records toward each opposite hub, generated from h1's
        # side so each unordered hub pair is assembled once
        h1bit = 1 << h1
        b3: dict[int, dict[int, int]] = {}
        b4: dict[int, set[int]] = {}
        mids2: dict[int, set[int]] = {}
        pool_h1 = pool_deg.get(h1, {})
        from_h1 = by_src.get(h1, ())
        from_h1_0 = by_src0.get(h1, ())

        def put3(h2: int, verts: int, cost: int) -> None:
            if h2 <= h1 or verts & (h1bit | (1 << h2)):
                return
            bucket = b3.setdefault(h2, {})
            old = bucket.get(verts)
            if old is None or cost < old:
                bucket[verts] = cost

        def put4(h2: int, a: int, b: int, c: int) -> None:
            if h2 <= h1 or a == b or a == c or b == c:
                return
            verts = (1 << a) | (1 << b) | (1 << c)
            if not verts & (h1bit | (1 << h2)):
                b4.setdefault(h2, set()).add(verts)

        # 3-branches h1 - x - y - h2
        for x, y, c1, im1 in from_h1:
            xy = (1 << x) | (1 << y)
            for dst2, c2, im2 in by_sc.get((x, y), ()):
                if c1 + c2 <= b333 and dst2 != h1:
                    inner = im1 | im2
                    if not inner & (xy | (1 << dst2)):
                        put3(dst2, xy | inner, c1 + c2)
            for h2 in centers_at.get(y, ()):
                if h2 != x and not im1 >> h2 & 1:
                    put3(h2, xy | im1, c1)
        for x in pool_h1:
            xbit = 1 << x
            for ctr2, dst2, c2, im2 in by_src.get(x, ()):
                if c2 <= b333 and dst2 != h1 and ctr2 != h1:
                    put3(dst2, xbit | (1 << ctr2) | im2, c2)

        if do_nine:
            # 4-branches h1 - a - b - c - h2, interior-free arcs only
            for a, b in from_h1_0:
                for c in by_sc0.get((a, b), ()):
                    for d in by_sc0.get((b, c), ()):
                        put4(d, a, b, c)
                    for h2 in centers_at.get(c, ()):
                        put4(h2, a, b, c)
                for ctr3, dst3 in by_src0.get(b, ()):
                    put4(dst3, a, b, ctr3)
            for a in pool_h1:
                for b, c in by_src0.get(a, ()):
                    for d in by_sc0.get((b, c), ()):
                        put4(d, a, b, c)
                    for h2 in centers_at.get(c, ()):
                        put4(h2, a, b, c)
            # 2-branch middles h1 - v - h2
            for ctr1, dst1 in from_h1_0:
                mids2.setdefault(dst1, set()).add(ctr1)

        hubs2 = set(b3)
        if do_nine:
            hubs2.update(b4)
        for h2 in sorted(hubs2):
            items3 = list(b3.get(h2, {}).items())
            recs4 = sorted(b4.get(h2, ())) if do_nine else []
            w333 = len(items3) >= 3
            m2: set[int] = set()
            if len(recs4) >= 2:
                m2 = mids2.get(h2, set()) | (
                    set(pool_h1) & set(pool_deg.get(h2, {})))
                m2 -= {h1, h2}
            w442 = bool(m2)
            w433 = bool(do_433 and recs4 and len(items3) >= 2)
            if w333 or w442 or w433:
                yield h1, h2, items3, recs4, sorted(m2), w333, w442, w433


def _theta_spans_py(
    paths: Sequence[Triple],
    i_max: int,
    arcs: Sequence[Arc],
) -> set[frozenset[int]]:
    spans: set[frozenset[int]] = set()
    b333 = i_max - 7
    by_center = paths_by_center(paths)
    for h1, h2, items3, recs4, m2, w333, w442, w433 in \
            _theta_hub_pairs(paths, i_max, arcs):
        h1bit = 1 << h1
        # remap to ids local to this hub pair: candidate spans stay
        # below machine-word width, one scan collects every path any
        # of them could contain, and each combination is counted with
        # a few single-word integer operations
        bmask = h1bit | (1 << h2)
        for v, _ in items3:
            bmask |= v
        for f in recs4:
            bmask |= f
        for c in m2:
            bmask |= 1 << c
        vid = {v: i for i, v in enumerate(sorted(_mask_set(bmask)))}

        def lmask(gmask: int) -> int:
            m = 0
            while gmask:
                low = gmask & -gmask
                m |= 1 << vid[low.bit_length() - 1]
                gmask ^= low
            return m

        hub_l = lmask(h1bit | (1 << h2))
        local: list[int] = []
        for z in vid:
            for x, y, _ in by_center.get(z, ()):
                if x in vid and y in vid:
                    local.append(
                        (1 << vid[z]) | (1 << vid[x]) | (1 << vid[y]))
        # every candidate needs at least usize - 3 >= 5 paths inside
        # and local is a superset of any candidate's inside paths, so
        # a shallow pool rules out the whole hub pair at once
        nloc = len(local)
        if nloc < 5:
            continue

        if w333:
            items3m = [(v, c, v.bit_count(), lmask(v))
                       for v, c in items3]
            for (g1, ca, s1, m1), (g2, cb, s2, mb2), (g3, cc, s3, m3) \
                    in combinations(items3m, 3):
                if ca + cb + cc > b333:
                    continue
                if m1 & mb2 or m1 & m3 or mb2 & m3:
                    continue
                usize = 2 + s1 + s2 + s3
                if nloc < usize - 1 and (
                        usize > i_max or nloc < usize - 3):
                    continue
                um = hub_l | m1 | mb2 | m3
                neg = ~um
                cnt = 0
                for pm in local:
                    if pm & neg == 0:
                        cnt += 1
                # an extra hub tree vertex p adds at most 3 paths, all
                # hub-centered and ending at p, so only near misses
                # can grow into a 9-vertex witness
                probe = usize <= i_max and cnt >= usize - 3
                if cnt >= usize - 1 or probe:
                    span = _mask_set(h1bit | (1 << h2) | g1 | g2 | g3)
                    if cnt >= usize - 1:
                        spans.add(span)
                    if probe:
                        _extend_with_hub_vertex(
                            spans, span, h1, h2, by_center)
        if recs4 and (w442 or w433) and nloc >= 8:
            recs4m = [(f, lmask(f)) for f in recs4]
            if w442:
                for (g1, fm1), (g2, fm2) in combinations(recs4m, 2):
                    if fm1 & fm2:
                        continue
                    for c in m2:
                        cm = 1 << vid[c]
                        if cm & (fm1 | fm2):
                            continue
                        neg = ~(hub_l | fm1 | fm2 | cm)
                        cnt = 0
                        for pm in local:
                            if pm & neg == 0:
                                cnt += 1
                        if cnt >= 8:
                            spans.add(_mask_set(
                                h1bit | (1 << h2) | g1 | g2 | (1 << c)))
            if w433:
                zero3 = [(v, lmask(v)) for v, c in items3 if c == 0]
                for gf, fm in recs4m:
                    for (gv1, m1), (gv2, mb2) in combinations(zero3, 2):
                        if m1 & mb2 or fm & m1 or fm & mb2:
                            continue
                        neg = ~(hub_l | fm | m1 | mb2)
                        cnt = 0
                        for pm in local:
                            if pm & neg == 0:
                                cnt += 1
                        if cnt >= 8:
                            spans.add(_mask_set(
                                h1bit | (1 << h2) | gf | gv1 | gv2))
    return spans


def _theta_spans_kernel(
    paths: Sequence[Triple],
    i_max: int,
    arcs: Sequence[Arc],
) -> set[frozenset[int]]:
    hp_h1: list[int] = []
    hp_h2: list[int] = []
    hp_flags: list[int] = []
    r3_ptr = [0]
    r3_verts: list[int] = []
    r3_len: list[int] = []
    r3_cost: list[int] = []
    r4_ptr = [0]
    r4_verts: list[int] = []
    m2_ptr = [0]
    m2_flat: list[int] = []
    for h1, h2, items3, recs4, m2, w333, w442, w433 in \
            _theta_hub_pairs(paths, i_max, arcs):
        hp_h1.append(h1)
        hp_h2.append(h2)
        hp_flags.append((1 if w333 else 0) | (2 if w442 else 0)
                        | (4 if w433 else 0))
        for v, c in items3:
            n = 0
            while v:
                low = v & -v
                r3_verts.append(low.bit_length() - 1)
                v ^= low
                n += 1
            r3_len.append(n)
            r3_cost.append(c)
            while n < 3:
                r3_verts.append(-1)
                n += 1
        r3_ptr.append(len(r3_len))
        for f in recs4:
            while f:
                low = f & -f
                r4_verts.append(low.bit_length() - 1)
                f ^= low
        r4_ptr.append(len(r4_verts) // 3)
        m2_flat.extend(m2)
        m2_ptr.append(len(m2_flat))
    if not hp_h1:
        return set()
    by_center = paths_by_center(paths)
    tri = np.asarray(paths, dtype=np.int32)
    nv = int(tri.max()) + 1
    order = np.argsort(tri[:, 0], kind="stable")
    cptr = np.zeros(nv + 1, dtype=np.int64)
    np.cumsum(np.bincount(tri[:, 0], minlength=nv), out=cptr[1:])
    cends = np.ascontiguousarray(tri[order][:, 1:3]).reshape(-1)
    rows = _kernels.theta_pair_scan(
        np.asarray(hp_h1, dtype=np.int32),
        np.asarray(hp_h2, dtype=np.int32),
        np.asarray(hp_flags, dtype=np.int32),
        np.asarray(r3_ptr, dtype=np.int64),
        np.asarray(r3_verts, dtype=np.int32),
        np.asarray(r3_len, dtype=np.int32),
        np.asarray(r3_cost, dtype=np.int32),
        np.asarray(r4_ptr, dtype=np.int64),
        np.asarray(r4_verts, dtype=np.int32),
        np.asarray(m2_ptr, dtype=np.int64),
        np.asarray(m2_flat, dtype=np.int32),
        cptr, cends, i_max - 7, i_max)
    spans: set[frozenset[int]] = set()
    for h1, h2, flag, verts in rows:
        span = frozenset(verts)
        if flag & 1:
            spans.add(span)
        if flag & 2:
            _extend_with_hub_vertex(spans, span, h1, h2, by_center)
    return spans


def _extend_with_hub_vertex(spans, u0, h1, h2, by_center):
    """Add spans with one extra vertex inside a hub's tree.

    The extra vertex p attaches only to its hub, so every witness path
    through p is centered at the hub and ends at p; p needs at least two
    such paths with partner ends inside the base span.
    """
    for hub in (h1, h2):
        cand: dict[int, int] = {}
        for x, y, _ in by_center.get(hub, ()):
            for p, s in ((x, y), (y, x)):
                if p not in u0 and s in u0:
                    cand[p] = cand.get(p, 0) + 1
        for p, k in cand.items():
            if k >= 2:
                spans.add(u0 | {p})


# ---------------------------------------------------------------------------
# span acceptance and minimal witness extraction


def paths_inside(
    by_center: Mapping[int, Sequence[tuple[int, int, int]]],
    span: frozenset[int] | set[int],
) -> list[int]:
    """Indices of family paths whose three vertices all lie in span."""
    out = []
    for z in span:
        for x, y, i in by_center.get(z, ()):
            if x in span and y in span:
                out.append(i)
    return sorted(out)


def minimal_within(
    paths: Sequence[Triple], inside: Sequence[int], i_max: int = 8
) -> list[tuple[int, ...]]:
    """All minimal dense sets among the given path indices.

    Subsets of inside stay subsets of inside, so minimality relative to
    this list is absolute minimality.
    """
    found: list[tuple[int, ...]] = []
    for size in range(2, min(i_max, len(inside)) + 1):
        for sub in combinations(inside, size):
            ss = set(sub)
            if any(set(f) <= ss for f in found):
                continue
            if is_dense(paths, sub):
                found.append(sub)
    return found


def _accepted_inside_sets(
    paths: Sequence[Triple],
    spans: Iterable[frozenset[int]],
    by_center: Mapping[int, Sequence[tuple[int, int, int]]] | None = None,
) -> list[tuple[int, ...]]:
    """Keep spans that really hold a dense set: at least |U|-1 paths.

    The test is exact in both directions for spans emitted by the shape
    searches, which produce the full span of each candidate witness.
    """
    if by_center is None:
        by_center = paths_by_center(paths)
    out: set[tuple[int, ...]] = set()
    for span in spans:
        inside = paths_inside(by_center, span)
        if len(inside) >= len(span) - 1:
            out.add(tuple(inside))
    return sorted(out)


def ring_dense_sets(
    paths: Sequence[Triple],
    i_max: int = 8,
    dist: Mapping[int, Mapping[int, int]] | None = None,
) -> list[tuple[int, ...]]:
    """Accepted ring spans, reported as the path set inside each span."""
    spans = ring_candidate_spans(paths, i_max, dist=dist)
    return _accepted_inside_sets(paths, spans)


def theta_dense_sets(
    paths: Sequence[Triple], i_max: int = 8
) -> list[tuple[int, ...]]:
    """Accepted theta spans, reported as the path set inside each span."""
    spans = theta_candidate_spans(paths, i_max)
    return _accepted_inside_sets(paths, spans)


# ---------------------------------------------------------------------------
# entry points


class GirthError(ValueError):
    """The union graph has a cycle shorter than 6, so the structure
    classification does not apply and the family is too large to brute
    force."""


def structured_minimal_dense(
    paths: Sequence[Triple], i_max: int = 8
) -> list[tuple[int, ...]]:
    """All minimal dense sets, assuming union graph girth at least 6."""
    found: set[tuple[int, ...]] = set(duplicate_witnesses(paths))
    found.update(cycle_witnesses(paths, i_max))
    spans = ring_candidate_spans(paths, i_max)
    spans |= theta_candidate_spans(paths, i_max)
    by_center = paths_by_center(paths)
    for inside in _accepted_inside_sets(paths, spans, by_center):
        found.update(minimal_within(paths, inside, i_max))
    return sorted(found, key=lambda t: (len(t), t))


def minimal_dense_sets(
    paths: Sequence[Triple], i_max: int = 8, method: str = "auto"
) -> list[tuple[int, ...]]:
    """All minimal dense sets of at most i_max paths.

    method "auto" uses the structured search when the union graph has
    girth at least 6 and falls back to subset enumeration otherwise;
    "structured" and "brute" force one route.
    """
    if not 2 <= i_max <= 8:
        raise ValueError("i_max must be between 2 and 8")
    if method not in ("auto", "structured", "brute"):
        raise ValueError(f"unknown method: {method!r}")
    if len(paths) < 2:
        return []
    if method == "brute":
        return brute_minimal_dense(paths, i_max)
    girth_ok = not short_cycle_exists(union_adjacency(paths))
    if method == "structured":
        if not girth_ok:
            raise GirthError(
                "union graph has a cycle shorter than 6; the structured "
                "search would be incomplete")
        return structured_minimal_dense(paths, i_max)
    if girth_ok:
        return structured_minimal_dense(paths, i_max)
    if len(paths) <= BRUTE_LIMIT:
        return brute_minimal_dense(paths, i_max)
    raise GirthError(
        "union graph has a cycle shorter than 6 and the family is too "
        "large for subset enumeration")
