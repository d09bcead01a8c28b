"""Array kernels behind the hot search loops.

The layered connected-subset scan serves three jobs, switched by a
threshold table and a mode flag:

* freeness certification: find j edges spanning at most thresholds[j] vertices,
* minimal dense-set search over 2-path families encoded as 3-vertex edges,
* low-level claimed-pair marking (record every tight connected subset).

A second kernel, ring_scan, grows the detour-arc chains used by the ring
candidate stream; see its docstring for the contract.

Enumeration discipline
----------------------
Subsets grow edge by edge from a seed (their minimum-index edge).  A step
sharing >= 2 vertices with the union is free; a step sharing exactly one
vertex ("jump") spends one unit of a budget L.  Free candidates are
explored with the usual exclusion discipline (ban a candidate for later
siblings after exploring its subtree); jump candidates are never banned,
which is required for completeness once a budget is present.

Write sigma(prefix) = span - ((w-2)*size + 2).  A jump raises sigma by
exactly 1, a free step never raises it, and any connected order of a
target with e edges and final slack s contains at most (e-1+s)/2 jumps
(w=3), independently of the order.  Rearranging any connected order
greedily (free steps while available) never increases the jump count, so
min-index seeding with budget L finds every target within the bound.
With w=3, slack -1 targets of at most 8 edges need at most 2 jumps except
8-edge targets, which may need a third; after a third jump no step may
raise or hold sigma, so every remaining edge lies inside the final union
and contains that jump's two fresh vertices plus one covered vertex.  The
gated third jump enumerates exactly those concentrated candidates via the
pair table, making the scan complete through 8-edge slack -1 levels on
3-uniform input.  A slack-0 level at j = kmax is complete for orders with
at most 2 jumps plus gated concentrated orders; the residual spread-supply
3-jump shapes at that single level are left to exact small-graph search or
to a structural certificate, and callers must not rely on the scan alone
there.

The kernel is nopython-compatible array code; with numba available (and
BES_NO_NUMBA unset) it is compiled, otherwise the same functions run as
pure Python for small inputs and benchmarking.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba present in normal installs
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and os.environ.get("BES_NO_NUMBA", "") not in ("1", "true", "yes")

MODE_FIRST = 0    # stop everything at the first hit
MODE_COLLECT = 1  # record hits, do not extend past a hit
MODE_MARK = 2     # record every tight subset and keep extending

NO_HIT = -1


def backend() -> str:
    return "numba" if USE_NUMBA else "python"


def build_vertex_csr(edges: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """CSR from vertex to the ids of edges containing it."""
    m, w = edges.shape
    flat = edges.reshape(-1).astype(np.int64)
    counts = np.bincount(flat, minlength=n)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    order = np.argsort(flat, kind="stable")
    eids = (order // w).astype(np.int32)
    return indptr, eids


def build_pair_table(edges: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """CSR from vertex pair (key u*n+v, u<v) to the edges containing both."""
    m, w = edges.shape
    iu, ju = np.triu_indices(w, 1)
    a = edges[:, iu].astype(np.int64)
    b = edges[:, ju].astype(np.int64)
    lo = np.minimum(a, b)
    hi = np.maximum(a, b)
    keys = (lo * n + hi).reshape(-1)
    vals = np.repeat(np.arange(m, dtype=np.int32), len(iu))
    order = np.argsort(keys, kind="stable")
    keys = keys[order]
    vals = vals[order]
    if len(keys) == 0:
        return keys, np.zeros(1, dtype=np.int64), vals
    uniq, start = np.unique(keys, return_index=True)
    ptr = np.empty(len(uniq) + 1, dtype=np.int64)
    ptr[:-1] = start
    ptr[-1] = len(keys)
    return uniq, ptr, vals


def _pair_lookup(pkeys, key):
    lo = 0
    hi = pkeys.shape[0]
    while lo < hi:
        mid = (lo + hi) // 2
        if pkeys[mid] < key:
            lo = mid + 1
        else:
            hi = mid
    if lo < pkeys.shape[0] and pkeys[lo] == key:
        return lo
    return -1


def _emit(out, max_rec, stride, kmax, vcap, n_rec, size, span,
          path_edges, union_list, ulen, extra, elen, extra2a, extra2b):
    """Write one hit record; extra2a/extra2b >= 0 append two more vertices."""
    if n_rec < max_rec:
        base = n_rec * stride
        out[base] = size
        out[base + 1] = span
        for a in range(kmax):
            if a < size:
                out[base + 2 + a] = path_edges[a]
            else:
                out[base + 2 + a] = NO_HIT
        k = 0
        for a in range(ulen):
            out[base + 2 + kmax + k] = union_list[a]
            k += 1
        for a in range(elen):
            out[base + 2 + kmax + k] = extra[a]
            k += 1
        if extra2a >= 0:
            out[base + 2 + kmax + k] = extra2a
            k += 1
        if extra2b >= 0:
            out[base + 2 + kmax + k] = extra2b
            k += 1
        while k < vcap:
            out[base + 2 + kmax + k] = NO_HIT
            k += 1
    return n_rec + 1


def _gate_tail(edges, pkeys, pptr, peids, thresholds, kmax, mode, out, max_rec,
               stride, vcap, in_union, used, union_list, ulen,
               path_edges, t, seed, extra, elen, gate_edge, key,
               n_rec, w, n):
    """Tail after the gated jump: every remaining edge consists of the gated
    fresh pair plus one covered vertex, so chase subsets of one probe list
    with the span frozen."""
    abort = False
    py = key // n
    pz = key % n
    used[gate_edge] = 1
    path_edges[t] = gate_edge
    span = ulen + elen + 2

    loc = _pair_lookup(pkeys, key)
    if loc < 0:
        used[gate_edge] = 0
        return n_rec, abort
    downs = np.empty(64, dtype=np.int32)
    nd = 0
    for q in range(pptr[loc], pptr[loc + 1]):
        e = peids[q]
        if used[e] == 1 or e <= seed:
            continue
        inside = True
        for a in range(w):
            x = edges[e, a]
            if x == py or x == pz:
                continue
            cov = in_union[x] == 1
            if not cov:
                for b in range(elen):
                    if extra[b] == x:
                        cov = True
                        break
            if not cov:
                inside = False
        if inside and nd < 64:
            downs[nd] = e
            nd += 1

    t0 = t + 1
    pick = np.empty(kmax + 2, dtype=np.int64)
    dsel = 0
    pos = 0
    while True:
        if pos < nd and t0 + dsel < kmax:
            e = downs[pos]
            pick[dsel] = pos
            dsel += 1
            path_edges[t0 + dsel - 1] = e
            used[e] = 1
            tt = t0 + dsel
            if thresholds[tt] >= 0 and span <= thresholds[tt]:
                n_rec = _emit(out, max_rec, stride, kmax, vcap, n_rec, tt, span,
                              path_edges, union_list, ulen, extra, elen,
                              py, pz)
                if mode == MODE_FIRST:
                    abort = True
                    break
            pos += 1
        else:
            if dsel == 0:
                break
            dsel -= 1
            p = pick[dsel]
            used[downs[p]] = 0
            pos = p + 1
    while dsel > 0:
        dsel -= 1
        used[downs[pick[dsel]]] = 0
    used[gate_edge] = 0
    return n_rec, abort


def _gate_try_pair(edges, pkeys, pptr, peids, thresholds, kmax, mode, out,
                   max_rec, stride, vcap, pbound, in_union, used,
                   union_list, ulen, path_edges, t, seed, extra, elen,
                   key, cmin, n_rec, w, n):
    """Verify down-supply >= cmin for one fresh pair, then run its tails."""
    abort = False
    loc = _pair_lookup(pkeys, key)
    if loc < 0:
        return n_rec, abort
    py = key // n
    pz = key % n
    supply = 0
    for q in range(pptr[loc], pptr[loc + 1]):
        e = peids[q]
        if used[e] == 1 or e <= seed:
            continue
        third_in = False
        for a in range(w):
            x = edges[e, a]
            if x == py or x == pz:
                continue
            if in_union[x] == 1:
                third_in = True
            else:
                for b in range(elen):
                    if extra[b] == x:
                        third_in = True
                        break
        if third_in:
            supply += 1
    if supply < cmin:
        return n_rec, abort
    for q in range(pptr[loc], pptr[loc + 1]):
        e = peids[q]
        if used[e] == 1 or e <= seed:
            continue
        share = 0
        for a in range(w):
            x = edges[e, a]
            if in_union[x] == 1:
                share += 1
            else:
                for b in range(elen):
                    if extra[b] == x:
                        share += 1
                        break
        if share != 1:
            continue
        t_child = t + 1
        if t_child > kmax:
            continue
        sigma_child = (ulen + elen + (w - share)) - ((w - 2) * t_child + 2)
        if sigma_child > pbound[t_child]:
            continue
        n_rec, abort = _gate_tail(
            edges, pkeys, pptr, peids, thresholds, kmax, mode, out, max_rec,
            stride, vcap, in_union, used, union_list, ulen, path_edges, t,
            seed, extra, elen, e, key, n_rec, w, n)
        if abort:
            return n_rec, abort
    return n_rec, abort


def _gate(edges, indptr, eids, pkeys, pptr, peids,
          thresholds, kmax, mode, out, max_rec, stride, vcap,
          pbound, in_union, hit_cnt, used,
          touched, ttop, union_list, ulen, path_edges,
          t, seed, extra, elen,
          pc_keys, pc_cnt, pc_len, pc_tmp, full_depth,
          cmin, n_rec, w, n):
    """Gated extra jump from a lazy node with all plain jumps spent.

    After this jump every remaining step adds no vertex, so at least cmin
    unused edges must consist of the jump's two fresh vertices plus one
    covered vertex; those supply edges double as the only viable jump
    candidates, so candidates concentrate on single fresh pairs.
    """
    abort = False
    # Fresh-pair concentration index of the enclosing full frame: free
    # pairs of once-covered edges occurring at least twice.  Built from
    # full-phase state only, so it is valid for every lazy descendant of
    # that frame and cached per frame depth.
    if pc_len[full_depth] < 0:
        cnt = 0
        for idx in range(ttop):
            e = touched[idx]
            if hit_cnt[e] != 1:
                continue
            u = np.int64(-1)
            v = np.int64(-1)
            ok = True
            for a in range(w):
                x = np.int64(edges[e, a])
                if in_union[x] == 0:
                    if u < 0:
                        u = x
                    elif v < 0:
                        v = x
                    else:
                        ok = False
            if not ok or v < 0:
                continue
            if u > v:
                u, v = v, u
            pc_tmp[cnt] = u * n + v
            cnt += 1
        if cnt > 1:
            sub = pc_tmp[:cnt]
            sub.sort()
        plen = 0
        i = 0
        while i < cnt:
            j = i + 1
            while j < cnt and pc_tmp[j] == pc_tmp[i]:
                j += 1
            if j - i >= 2:
                pc_keys[full_depth, plen] = pc_tmp[i]
                pc_cnt[full_depth, plen] = j - i
                plen += 1
            i = j
        pc_len[full_depth] = plen
    plen = pc_len[full_depth]

    thresh = cmin - elen
    if thresh >= 2:
        # concentrated supply forces a repeated fresh pair visible from the
        # full frame (at most elen supply edges hide behind lazy vertices)
        for pidx in range(plen):
            if pc_cnt[full_depth, pidx] < thresh:
                continue
            n_rec, abort = _gate_try_pair(
                edges, pkeys, pptr, peids, thresholds, kmax, mode, out,
                max_rec, stride, vcap, pbound, in_union, used,
                union_list, ulen, path_edges, t, seed, extra, elen,
                pc_keys[full_depth, pidx], cmin, n_rec, w, n)
            if abort:
                return n_rec, abort
        return n_rec, abort

    # rare low-sigma nodes: enumerate every viable one-anchored candidate
    tried = np.empty(128, dtype=np.int64)
    ntried = 0
    for idx in range(ttop):
        e = touched[idx]
        if hit_cnt[e] != 1 or used[e] == 1 or e <= seed:
            continue
        u = np.int64(-1)
        v = np.int64(-1)
        ok = True
        for a in range(w):
            x = np.int64(edges[e, a])
            if in_union[x] == 0:
                covered = False
                for b in range(elen):
                    if extra[b] == x:
                        covered = True
                        break
                if covered:
                    ok = False
                    break
                if u < 0:
                    u = x
                elif v < 0:
                    v = x
                else:
                    ok = False
                    break
        if not ok or v < 0:
            continue
        if u > v:
            u, v = v, u
        key = u * n + v
        dup = False
        for b in range(ntried):
            if tried[b] == key:
                dup = True
                break
        if dup:
            continue
        if ntried < 128:
            tried[ntried] = key
            ntried += 1
        n_rec, abort = _gate_try_pair(
            edges, pkeys, pptr, peids, thresholds, kmax, mode, out,
            max_rec, stride, vcap, pbound, in_union, used,
            union_list, ulen, path_edges, t, seed, extra, elen,
            key, cmin, n_rec, w, n)
        if abort:
            return n_rec, abort
    for b0 in range(elen):
        y = extra[b0]
        for q in range(indptr[y], indptr[y + 1]):
            e = eids[q]
            if used[e] == 1 or e <= seed or hit_cnt[e] != 0:
                continue
            u = np.int64(-1)
            v = np.int64(-1)
            anchors = 0
            ok = True
            for a in range(w):
                x = np.int64(edges[e, a])
                covered = in_union[x] == 1
                if not covered:
                    for c in range(elen):
                        if extra[c] == x:
                            covered = True
                            break
                if covered:
                    anchors += 1
                else:
                    if u < 0:
                        u = x
                    elif v < 0:
                        v = x
                    else:
                        ok = False
                        break
            if not ok or anchors != 1 or v < 0:
                continue
            if u > v:
                u, v = v, u
            key = u * n + v
            dup = False
            for b in range(ntried):
                if tried[b] == key:
                    dup = True
                    break
            if dup:
                continue
            if ntried < 128:
                tried[ntried] = key
                ntried += 1
            n_rec, abort = _gate_try_pair(
                edges, pkeys, pptr, peids, thresholds, kmax, mode, out,
                max_rec, stride, vcap, pbound, in_union, used,
                union_list, ulen, path_edges, t, seed, extra, elen,
                key, cmin, n_rec, w, n)
            if abort:
                return n_rec, abort
    return n_rec, abort


def _probe_vertex(edges, pkeys, pptr, peids, in_union, extra, elen, used, ban,
                  seed, lz_cand, lz_seen, lz_seen_undo, ctop, seen_top,
                  union_list, ulen, y, n):
    """Push edges containing y plus one already-covered vertex onto lz_cand."""
    for b in range(ulen + elen):
        if b < ulen:
            x = union_list[b]
        else:
            x = extra[b - ulen]
        if x == y:
            continue
        if x < y:
            key = np.int64(x) * n + y
        else:
            key = np.int64(y) * n + x
        loc = _pair_lookup(pkeys, key)
        if loc < 0:
            continue
        for q in range(pptr[loc], pptr[loc + 1]):
            e = peids[q]
            if used[e] == 0 and ban[e] == 0 and e > seed and lz_seen[e] == 0:
                lz_cand[ctop] = e
                ctop += 1
                lz_seen[e] = 1
                lz_seen_undo[seen_top] = e
                seen_top += 1
    return ctop, seen_top


def _lazy(edges, indptr, eids, pkeys, pptr, peids,
          thresholds, kmax, gate_on, mode, out, max_rec, stride, vcap,
          pbound, in_union, hit_cnt, used, ban,
          touched, ttop, c2s, c2top,
          union_list, ulen, path_edges, t_entry,
          seed, jump_edge,
          lz_cand, lz_seen, lz_seen_undo, lz_ban, lz_ban_undo,
          lf_edge, lf_cursor, lf_top, lf_seen, lf_banu, lf_elen, lf_gate,
          extra,
          pc_keys, pc_cnt, pc_len, pc_tmp, full_depth,
          n_rec, w, n):
    """Explore the subtree below a budget-exhausting jump.

    Only free steps (and possibly one gated jump) remain, so the global
    incidence counters stay untouched: candidates come from the full-phase
    c2 snapshot plus pair-table probes against the vertices added here.
    Leaves lz_seen and lz_ban clean on return.  Returns (n_rec, abort).
    """
    dlz = 0
    elen = 0
    seen_top = 0
    banu_top = 0
    ctop = 0

    for a in range(w):
        v = edges[jump_edge, a]
        if in_union[v] == 0:
            have = False
            for b in range(elen):
                if extra[b] == v:
                    have = True
                    break
            if not have:
                extra[elen] = v
                elen += 1
    used[jump_edge] = 1
    path_edges[t_entry] = jump_edge

    for idx in range(c2top):
        e = c2s[idx]
        if used[e] == 0 and ban[e] == 0 and e > seed and lz_seen[e] == 0:
            lz_cand[ctop] = e
            ctop += 1
            lz_seen[e] = 1
            lz_seen_undo[seen_top] = e
            seen_top += 1
    for b in range(elen):
        ctop, seen_top = _probe_vertex(
            edges, pkeys, pptr, peids, in_union, extra, elen, used, ban, seed,
            lz_cand, lz_seen, lz_seen_undo, ctop, seen_top,
            union_list, ulen, extra[b], n)

    abort = False
    tcur = t_entry + 1
    span = ulen + elen
    hit_stop = False
    if thresholds[tcur] >= 0 and span <= thresholds[tcur]:
        n_rec = _emit(out, max_rec, stride, kmax, vcap, n_rec, tcur, span,
                      path_edges, union_list, ulen, extra, elen, -1, -1)
        if mode == MODE_FIRST:
            abort = True
        elif mode == MODE_COLLECT:
            hit_stop = True

    lf_edge[0] = jump_edge
    lf_cursor[0] = 0
    lf_top[0] = ctop
    lf_seen[0] = 0
    lf_banu[0] = banu_top
    lf_elen[0] = elen
    lf_gate[0] = 1 if (gate_on == 1 and not hit_stop and tcur < kmax) else 0
    if hit_stop or tcur >= kmax:
        lf_cursor[0] = lf_top[0]

    while dlz >= 0 and not abort:
        t = t_entry + 1 + dlz
        cur = lf_cursor[dlz]
        top = lf_top[dlz]
        if cur < top:
            lf_cursor[dlz] = cur + 1
            g = lz_cand[cur]
            if used[g] == 1 or lz_ban[g] == 1:
                continue
            elen_here = lf_elen[dlz]
            share = 0
            for a in range(w):
                v = edges[g, a]
                if in_union[v] == 1:
                    share += 1
                else:
                    for b in range(elen_here):
                        if extra[b] == v:
                            share += 1
                            break
            if share < 2:
                continue
            t_child = t + 1
            if t_child > kmax:
                continue
            add = w - share
            sigma_child = (ulen + elen_here + add) - ((w - 2) * t_child + 2)
            if sigma_child > pbound[t_child]:
                continue
            used[g] = 1
            path_edges[t] = g
            elen2 = elen_here
            ctop2 = lf_top[dlz]
            seen_base = seen_top
            if add > 0:
                for a in range(w):
                    v = edges[g, a]
                    if in_union[v] == 0:
                        have = False
                        for b in range(elen2):
                            if extra[b] == v:
                                have = True
                                break
                        if not have:
                            extra[elen2] = v
                            elen2 += 1
                            ctop2, seen_top = _probe_vertex(
                                edges, pkeys, pptr, peids, in_union, extra,
                                elen2, used, ban, seed, lz_cand, lz_seen,
                                lz_seen_undo, ctop2, seen_top,
                                union_list, ulen, v, n)
            dlz += 1
            lf_edge[dlz] = g
            lf_cursor[dlz] = 0
            lf_top[dlz] = ctop2
            lf_seen[dlz] = seen_base
            lf_banu[dlz] = banu_top
            lf_elen[dlz] = elen2
            lf_gate[dlz] = 1 if gate_on == 1 else 0
            span = ulen + elen2
            if thresholds[t_child] >= 0 and span <= thresholds[t_child]:
                n_rec = _emit(out, max_rec, stride, kmax, vcap, n_rec, t_child,
                              span, path_edges, union_list, ulen, extra, elen2,
                              -1, -1)
                if mode == MODE_FIRST:
                    abort = True
                elif mode == MODE_COLLECT:
                    lf_cursor[dlz] = lf_top[dlz]
                    lf_gate[dlz] = 0
            if t_child >= kmax:
                lf_cursor[dlz] = lf_top[dlz]
                lf_gate[dlz] = 0
            continue

        if lf_gate[dlz] == 1:
            lf_gate[dlz] = 0
            if w == 3:
                sigma_here = (ulen + lf_elen[dlz]) - ((w - 2) * t + 2)
                jstar = t + sigma_here + 3
                if jstar <= kmax and t + 1 <= kmax:
                    cmin = 2 * sigma_here + t + 5 - kmax
                    if cmin < 1:
                        cmin = 1
                    n_rec, abort = _gate(
                        edges, indptr, eids, pkeys, pptr, peids,
                        thresholds, kmax, mode, out, max_rec, stride, vcap,
                        pbound, in_union, hit_cnt, used,
                        touched, ttop, union_list, ulen, path_edges,
                        t, seed, extra, lf_elen[dlz],
                        pc_keys, pc_cnt, pc_len, pc_tmp, full_depth,
                        cmin, n_rec, w, n)
                    if abort:
                        break
            continue

        g = lf_edge[dlz]
        used[g] = 0
        while seen_top > lf_seen[dlz]:
            seen_top -= 1
            lz_seen[lz_seen_undo[seen_top]] = 0
        while banu_top > lf_banu[dlz]:
            banu_top -= 1
            lz_ban[lz_ban_undo[banu_top]] = 0
        dlz -= 1
        if dlz >= 0:
            lz_ban[g] = 1
            lz_ban_undo[banu_top] = g
            banu_top += 1

    while dlz >= 0:
        used[lf_edge[dlz]] = 0
        while seen_top > lf_seen[dlz]:
            seen_top -= 1
            lz_seen[lz_seen_undo[seen_top]] = 0
        dlz -= 1
    while seen_top > 0:
        seen_top -= 1
        lz_seen[lz_seen_undo[seen_top]] = 0
    while banu_top > 0:
        banu_top -= 1
        lz_ban[lz_ban_undo[banu_top]] = 0
    return n_rec, abort


def _scan(edges, indptr, eids, pkeys, pptr, peids,
          thresholds, kmax, budget, gate_on, mode, out, max_rec, stride, vcap):
    """Core scan; returns the number of hit records (may exceed max_rec)."""
    m, w = edges.shape
    n = indptr.shape[0] - 1

    s_of = np.empty(kmax + 1, dtype=np.int64)
    for j in range(kmax + 1):
        if thresholds[j] >= 0:
            s_of[j] = thresholds[j] - ((w - 2) * j + 2)
        else:
            s_of[j] = -(10 ** 9)
    # a subset of size t can reach a hit only if sigma(t) <= pbound[t]
    pbound = np.empty(kmax + 2, dtype=np.int64)
    for t in range(kmax + 1):
        best = -(10 ** 9)
        for j in range(t, kmax + 1):
            cand = s_of[j] + (w - 2) * (j - t)
            if cand > best:
                best = cand
        pbound[t] = best
    pbound[kmax + 1] = -(10 ** 9)

    in_union = np.zeros(n, dtype=np.uint8)
    hit_cnt = np.zeros(m, dtype=np.int16)
    used = np.zeros(m, dtype=np.uint8)
    ban = np.zeros(m, dtype=np.uint8)
    lz_ban = np.zeros(m, dtype=np.uint8)

    touched = np.empty(m, dtype=np.int32)
    c2s = np.empty(m, dtype=np.int32)
    union_list = np.empty(kmax * w + 8, dtype=np.int32)
    path_edges = np.empty(kmax + 2, dtype=np.int32)
    ban_stack = np.empty(m + kmax + 2, dtype=np.int32)

    F = kmax + 2
    fr_edge = np.empty(F, dtype=np.int32)
    fr_cursor = np.empty(F, dtype=np.int64)
    fr_phase = np.empty(F, dtype=np.int8)
    fr_touch = np.empty(F, dtype=np.int64)
    fr_c2 = np.empty(F, dtype=np.int64)
    fr_ulen = np.empty(F, dtype=np.int64)
    fr_ban = np.empty(F, dtype=np.int64)
    fr_jumps = np.empty(F, dtype=np.int64)

    pc_keys = np.empty((F, m + 4), dtype=np.int64)
    pc_cnt = np.empty((F, m + 4), dtype=np.int32)
    pc_len = np.empty(F, dtype=np.int64)
    pc_tmp = np.empty(m + 4, dtype=np.int64)

    lz_cand = np.empty(m + 8, dtype=np.int32)
    lz_seen = np.zeros(m, dtype=np.uint8)
    lz_seen_undo = np.empty(m + 8, dtype=np.int32)
    lz_ban_undo = np.empty(m + 8, dtype=np.int32)
    lf_edge = np.empty(F, dtype=np.int32)
    lf_cursor = np.empty(F, dtype=np.int64)
    lf_top = np.empty(F, dtype=np.int64)
    lf_seen = np.empty(F, dtype=np.int64)
    lf_banu = np.empty(F, dtype=np.int64)
    lf_elen = np.empty(F, dtype=np.int64)
    lf_gate = np.empty(F, dtype=np.int8)
    extra = np.empty(kmax * w + 8, dtype=np.int32)

    n_rec = 0

    for seed in range(m):
        ulen = 0
        ttop = 0
        c2top = 0
        for a in range(w):
            v = edges[seed, a]
            if in_union[v] == 0:
                union_list[ulen] = v
                ulen += 1
                in_union[v] = 1
        for a in range(ulen):
            v = union_list[a]
            for q in range(indptr[v], indptr[v + 1]):
                e = eids[q]
                hit_cnt[e] += 1
                if hit_cnt[e] == 1:
                    touched[ttop] = e
                    ttop += 1
                elif hit_cnt[e] == 2:
                    c2s[c2top] = e
                    c2top += 1
        used[seed] = 1
        path_edges[0] = seed

        abort = False
        seed_stop = False
        if thresholds[1] >= 0 and ulen <= thresholds[1]:
            n_rec = _emit(out, max_rec, stride, kmax, vcap, n_rec, 1, ulen,
                          path_edges, union_list, ulen, extra, 0, -1, -1)
            if mode == MODE_FIRST:
                abort = True
            elif mode == MODE_COLLECT:
                seed_stop = True

        depth = 0
        fr_edge[0] = seed
        fr_cursor[0] = 0
        fr_phase[0] = 0
        fr_touch[0] = ttop
        fr_c2[0] = c2top
        fr_ulen[0] = ulen
        fr_ban[0] = 0
        fr_jumps[0] = 0
        pc_len[0] = -1
        if seed_stop:
            fr_phase[0] = 1
            fr_cursor[0] = ttop
        bantop = 0

        while depth >= 0 and not abort:
            t = depth + 1
            advanced = False
            while True:
                phase = fr_phase[depth]
                if phase == 0:
                    limit = fr_c2[depth]
                else:
                    limit = fr_touch[depth]
                cur = fr_cursor[depth]
                if cur >= limit:
                    if phase == 0:
                        fr_phase[depth] = 1
                        if fr_jumps[depth] < budget and t < kmax:
                            fr_cursor[depth] = 0
                        else:
                            fr_cursor[depth] = fr_touch[depth]
                        continue
                    break
                fr_cursor[depth] = cur + 1
                if phase == 0:
                    g = c2s[cur]
                    if used[g] == 1 or ban[g] == 1 or g <= seed:
                        continue
                    if hit_cnt[g] < 2:
                        continue
                else:
                    g = touched[cur]
                    if used[g] == 1 or g <= seed:
                        continue
                    if hit_cnt[g] != 1:
                        continue
                share = hit_cnt[g]
                new_v = w - share
                t_child = t + 1
                if t_child > kmax:
                    continue
                sigma_child = (fr_ulen[depth] + new_v) - ((w - 2) * t_child + 2)
                if sigma_child > pbound[t_child]:
                    continue
                jumps_child = fr_jumps[depth] + (1 if share == 1 else 0)

                if share == 1 and jumps_child >= budget:
                    n_rec, abort = _lazy(
                        edges, indptr, eids, pkeys, pptr, peids,
                        thresholds, kmax, gate_on, mode, out, max_rec, stride,
                        vcap, pbound, in_union, hit_cnt, used, ban,
                        touched, fr_touch[depth], c2s, fr_c2[depth],
                        union_list, fr_ulen[depth], path_edges, t,
                        seed, g,
                        lz_cand, lz_seen, lz_seen_undo, lz_ban, lz_ban_undo,
                        lf_edge, lf_cursor, lf_top, lf_seen, lf_banu, lf_elen,
                        lf_gate, extra,
                        pc_keys, pc_cnt, pc_len, pc_tmp, depth,
                        n_rec, w, n)
                    if abort:
                        break
                    continue

                used[g] = 1
                path_edges[t] = g
                ulen2 = fr_ulen[depth]
                t2 = fr_touch[depth]
                c22 = fr_c2[depth]
                for a in range(w):
                    v = edges[g, a]
                    if in_union[v] == 0:
                        union_list[ulen2] = v
                        ulen2 += 1
                        in_union[v] = 1
                        for q in range(indptr[v], indptr[v + 1]):
                            e = eids[q]
                            hit_cnt[e] += 1
                            if hit_cnt[e] == 1:
                                touched[t2] = e
                                t2 += 1
                            elif hit_cnt[e] == 2:
                                c2s[c22] = e
                                c22 += 1
                depth += 1
                fr_edge[depth] = g
                fr_cursor[depth] = 0
                fr_phase[depth] = 0
                fr_touch[depth] = t2
                fr_c2[depth] = c22
                fr_ulen[depth] = ulen2
                fr_ban[depth] = bantop
                fr_jumps[depth] = jumps_child
                pc_len[depth] = -1

                if thresholds[t_child] >= 0 and ulen2 <= thresholds[t_child]:
                    n_rec = _emit(out, max_rec, stride, kmax, vcap, n_rec,
                                  t_child, ulen2, path_edges, union_list,
                                  ulen2, extra, 0, -1, -1)
                    if mode == MODE_FIRST:
                        abort = True
                    elif mode == MODE_COLLECT:
                        fr_cursor[depth] = fr_touch[depth]
                        fr_phase[depth] = 1
                advanced = True
                break

            if abort:
                break
            if advanced:
                continue
            g = fr_edge[depth]
            if depth > 0:
                parent = depth - 1
                for a in range(fr_ulen[parent], fr_ulen[depth]):
                    v = union_list[a]
                    in_union[v] = 0
                    for q in range(indptr[v], indptr[v + 1]):
                        hit_cnt[eids[q]] -= 1
                while bantop > fr_ban[depth]:
                    bantop -= 1
                    ban[ban_stack[bantop]] = 0
                used[g] = 0
                if hit_cnt[g] >= 2:
                    # free-stream child: exclude from later siblings
                    ban[g] = 1
                    ban_stack[bantop] = g
                    bantop += 1
                depth = parent
            else:
                for a in range(fr_ulen[0]):
                    v = union_list[a]
                    in_union[v] = 0
                    for q in range(indptr[v], indptr[v + 1]):
                        hit_cnt[eids[q]] -= 1
                while bantop > 0:
                    bantop -= 1
                    ban[ban_stack[bantop]] = 0
                used[seed] = 0
                depth = -1

        if abort:
            while depth >= 0:
                if depth > 0:
                    parent = depth - 1
                    for a in range(fr_ulen[parent], fr_ulen[depth]):
                        v = union_list[a]
                        in_union[v] = 0
                        for q in range(indptr[v], indptr[v + 1]):
                            hit_cnt[eids[q]] -= 1
                    used[fr_edge[depth]] = 0
                    depth = parent
                else:
                    for a in range(fr_ulen[0]):
                        v = union_list[a]
                        in_union[v] = 0
                        for q in range(indptr[v], indptr[v + 1]):
                            hit_cnt[eids[q]] -= 1
                    used[seed] = 0
                    depth = -1
            while bantop > 0:
                bantop -= 1
                ban[ban_stack[bantop]] = 0
            return n_rec
    return n_rec


def _ring_chains(a_ctr, a_dst, a_cost, occ_ptr, occ_flat,
                 pool_ptr, pool_eids, seed_ptr, seed_eids,
                 dist, nv, i_max, lmax, out, max_rows, vcap):
    """Grow arc chains and record the vertex set of every closed chain.

    A chain of k arcs covers cycle vertices v0..vk plus the arcs' interior
    vertices; the next arc must start at the current arc's center and be
    centered at its destination.  Pools are sorted by cost, so a candidate
    over the remaining-cost budget ends its whole pool.  dist[v0, head]
    must stay within both the arc allowance and the cost allowance or the
    chain can never close.  Rows are sorted vertex lists padded with -1;
    the returned count may exceed max_rows (caller retries bigger).
    """
    n_rows = 0
    cv = np.empty(vcap + 4, dtype=np.int32)
    lv_kb = np.empty(lmax + 2, dtype=np.int64)
    lv_cost = np.empty(lmax + 2, dtype=np.int64)
    lv_base = np.empty(lmax + 2, dtype=np.int64)
    pos = np.empty(lmax + 2, dtype=np.int64)
    lim = np.empty(lmax + 2, dtype=np.int64)
    row = np.empty(vcap, dtype=np.int32)
    for v0 in range(nv):
        for sq in range(seed_ptr[v0], seed_ptr[v0 + 1]):
            s0 = seed_eids[sq]
            c0 = a_cost[s0]
            bound0 = lmax if lmax < i_max - c0 else i_max - c0
            if dist[v0, a_dst[s0]] > bound0 - 1:
                continue
            cvlen = 1
            cv[0] = v0
            for qq in range(occ_ptr[s0], occ_ptr[s0 + 1]):
                cv[cvlen] = occ_flat[qq]
                cvlen += 1
            k = 1
            lv_kb[1] = a_dst[s0]
            lv_cost[1] = c0
            lv_base[1] = cvlen
            key = np.int64(a_ctr[s0]) * nv + a_dst[s0]
            pos[1] = pool_ptr[key]
            lim[1] = pool_ptr[key + 1]
            while k >= 1:
                if pos[k] >= lim[k]:
                    cvlen = lv_base[k]
                    k -= 1
                    continue
                j = pool_eids[pos[k]]
                pos[k] += 1
                cost1 = lv_cost[k] + a_cost[j]
                if cost1 > i_max - k - 1:
                    pos[k] = lim[k]
                    continue
                clash = False
                for qq in range(occ_ptr[j], occ_ptr[j + 1]):
                    x = occ_flat[qq]
                    for b in range(cvlen):
                        if cv[b] == x:
                            clash = True
                            break
                    if clash:
                        break
                if clash:
                    continue
                dj = a_dst[j]
                if dj == v0:
                    if k + 1 >= 5:
                        rl = cvlen
                        for b in range(cvlen):
                            row[b] = cv[b]
                        for qq in range(occ_ptr[j], occ_ptr[j + 1]):
                            row[rl] = occ_flat[qq]
                            rl += 1
                        for bi in range(1, rl):
                            x = row[bi]
                            bj = bi - 1
                            while bj >= 0 and row[bj] > x:
                                row[bj + 1] = row[bj]
                                bj -= 1
                            row[bj + 1] = x
                        if n_rows < max_rows:
                            base = n_rows * vcap
                            for b in range(rl):
                                out[base + b] = row[b]
                            for b in range(rl, vcap):
                                out[base + b] = -1
                        n_rows += 1
                    continue
                k1 = k + 1
                if k1 > lmax - 1 or cost1 > i_max - k - 2:
                    continue
                indup = False
                for b in range(cvlen):
                    if cv[b] == dj:
                        indup = True
                        break
                if indup:
                    continue
                bound = lmax if lmax < i_max - cost1 else i_max - cost1
                if dist[v0, dj] > bound - k1:
                    continue
                lv_base[k1] = cvlen
                for qq in range(occ_ptr[j], occ_ptr[j + 1]):
                    cv[cvlen] = occ_flat[qq]
                    cvlen += 1
                key = np.int64(lv_kb[k]) * nv + dj
                lv_kb[k1] = dj
                lv_cost[k1] = cost1
                pos[k1] = pool_ptr[key]
                lim[k1] = pool_ptr[key + 1]
                k = k1
    return n_rows


def _in_small(arr, n, v):
    for t in range(n):
        if arr[t] == v:
            return True
    return False


def _rows_disjoint(va, ia, na, vb, ib, nb):
    for t in range(na):
        x = va[ia * 3 + t]
        for u in range(nb):
            if vb[ib * 3 + u] == x:
                return False
    return True


def _count_inside(uu, usz, lz, lx, ly, nloc, tmin):
    """Local paths fully inside the candidate vertex set uu[:usz].

    Returns -1 as soon as the remaining paths cannot reach tmin, so a
    non-negative return is the exact count.
    """
    cnt = 0
    for p in range(nloc):
        if cnt + nloc - p < tmin:
            return -1
        if _in_small(uu, usz, lz[p]) and _in_small(uu, usz, lx[p]) \
                and _in_small(uu, usz, ly[p]):
            cnt += 1
    return cnt


def _theta_emit(out, max_rows, n_rows, h1, h2, flag, uu, usz):
    if n_rows < max_rows:
        base = n_rows * 13
        out[base] = h1
        out[base + 1] = h2
        out[base + 2] = flag
        out[base + 3] = usz
        for t in range(usz):
            out[base + 4 + t] = uu[t]
        for t in range(usz, 9):
            out[base + 4 + t] = -1
    return n_rows + 1


def _theta_pairs(hp_h1, hp_h2, hp_flags,
                 r3_ptr, r3_verts, r3_len, r3_cost,
                 r4_ptr, r4_verts, m2_ptr, m2_flat,
                 cptr, cends, b333, i_max, ucap, npaths,
                 out, max_rows):
    """Assemble theta candidates for prepared hub pairs.

    Per pair: merge the record vertices into a sorted universe, collect
    the paths living inside it, then try every branch combination,
    counting the paths inside each candidate's at most nine vertices.
    Rows are (h1, h2, flag, usize, verts padded to 9); flag bit 0 is an
    accepted span, bit 1 a near miss to probe for a hub tree vertex.
    The returned count may exceed max_rows (caller retries bigger).
    """
    n_rows = 0
    univ = np.empty(ucap, dtype=np.int32)
    lz = np.empty(npaths, dtype=np.int32)
    lx = np.empty(npaths, dtype=np.int32)
    ly = np.empty(npaths, dtype=np.int32)
    uu = np.empty(12, dtype=np.int32)
    for hp in range(hp_h1.shape[0]):
        h1 = hp_h1[hp]
        h2 = hp_h2[hp]
        flags = hp_flags[hp]
        a3 = r3_ptr[hp]
        z3 = r3_ptr[hp + 1]
        a4 = r4_ptr[hp]
        z4 = r4_ptr[hp + 1]
        am = m2_ptr[hp]
        zm = m2_ptr[hp + 1]
        un = 0
        univ[un] = h1
        un += 1
        univ[un] = h2
        un += 1
        for r in range(a3, z3):
            for t in range(r3_len[r]):
                univ[un] = r3_verts[r * 3 + t]
                un += 1
        for r in range(a4, z4):
            for t in range(3):
                univ[un] = r4_verts[r * 3 + t]
                un += 1
        for t in range(am, zm):
            univ[un] = m2_flat[t]
            un += 1
        for i in range(1, un):
            x = univ[i]
            j = i - 1
            while j >= 0 and univ[j] > x:
                univ[j + 1] = univ[j]
                j -= 1
            univ[j + 1] = x
        w = 1
        for i in range(1, un):
            if univ[i] != univ[w - 1]:
                univ[w] = univ[i]
                w += 1
        un = w
        nloc = 0
        for ui in range(un):
            z = univ[ui]
            for r in range(cptr[z], cptr[z + 1]):
                x = cends[2 * r]
                y = cends[2 * r + 1]
                lo = 0
                hi = un - 1
                okx = False
                while lo <= hi:
                    mid = (lo + hi) >> 1
                    v = univ[mid]
                    if v == x:
                        okx = True
                        break
                    if v < x:
                        lo = mid + 1
                    else:
                        hi = mid - 1
                if not okx:
                    continue
                lo = 0
                hi = un - 1
                oky = False
                while lo <= hi:
                    mid = (lo + hi) >> 1
                    v = univ[mid]
                    if v == y:
                        oky = True
                        break
                    if v < y:
                        lo = mid + 1
                    else:
                        hi = mid - 1
                if not oky:
                    continue
                lz[nloc] = z
                lx[nloc] = x
                ly[nloc] = y
                nloc += 1
        # every candidate needs at least usize - 3 >= 5 paths inside and
        # the local pool bounds any candidate's count from above
        if nloc < 5:
            continue
        if flags & 1:
            for i in range(a3, z3 - 2):
                si = r3_len[i]
                ci = r3_cost[i]
                for j in range(i + 1, z3 - 1):
                    if ci + r3_cost[j] > b333:
                        continue
                    sj = r3_len[j]
                    if not _rows_disjoint(r3_verts, i, si, r3_verts, j, sj):
                        continue
                    for k in range(j + 1, z3):
                        if ci + r3_cost[j] + r3_cost[k] > b333:
                            continue
                        sk = r3_len[k]
                        if not _rows_disjoint(
                                r3_verts, k, sk, r3_verts, i, si):
                            continue
                        if not _rows_disjoint(
                                r3_verts, k, sk, r3_verts, j, sj):
                            continue
                        usz = 2 + si + sj + sk
                        may_probe = usz <= i_max
                        if nloc < usz - 1 and (
                                not may_probe or nloc < usz - 3):
                            continue
                        uu[0] = h1
                        uu[1] = h2
                        w = 2
                        for t in range(si):
                            uu[w] = r3_verts[i * 3 + t]
                            w += 1
                        for t in range(sj):
                            uu[w] = r3_verts[j * 3 + t]
                            w += 1
                        for t in range(sk):
                            uu[w] = r3_verts[k * 3 + t]
                            w += 1
                        tmin = usz - 3 if may_probe else usz - 1
                        cnt = _count_inside(uu, usz, lz, lx, ly, nloc, tmin)
                        if cnt < 0:
                            continue
                        flag = 0
                        if cnt >= usz - 1:
                            flag |= 1
                        if may_probe and cnt >= usz - 3:
                            flag |= 2
                        if flag:
                            n_rows = _theta_emit(out, max_rows, n_rows,
                                                 h1, h2, flag, uu, usz)
        if flags & 6 and nloc >= 8:
            if flags & 2:
                for i in range(a4, z4 - 1):
                    for j in range(i + 1, z4):
                        if not _rows_disjoint(
                                r4_verts, i, 3, r4_verts, j, 3):
                            continue
                        for t in range(am, zm):
                            c = m2_flat[t]
                            if _in_small(r4_verts[i * 3:], 3, c) or \
                                    _in_small(r4_verts[j * 3:], 3, c):
                                continue
                            uu[0] = h1
                            uu[1] = h2
                            for u in range(3):
                                uu[2 + u] = r4_verts[i * 3 + u]
                                uu[5 + u] = r4_verts[j * 3 + u]
                            uu[8] = c
                            cnt = _count_inside(uu, 9, lz, lx, ly, nloc, 8)
                            if cnt >= 8:
                                n_rows = _theta_emit(out, max_rows, n_rows,
                                                     h1, h2, 1, uu, 9)
            if flags & 4:
                for f in range(a4, z4):
                    for i in range(a3, z3 - 1):
                        if r3_cost[i] != 0:
                            continue
                        if not _rows_disjoint(
                                r4_verts, f, 3, r3_verts, i, 2):
                            continue
                        for j in range(i + 1, z3):
                            if r3_cost[j] != 0:
                                continue
                            if not _rows_disjoint(
                                    r3_verts, i, 2, r3_verts, j, 2):
                                continue
                            if not _rows_disjoint(
                                    r4_verts, f, 3, r3_verts, j, 2):
                                continue
                            uu[0] = h1
                            uu[1] = h2
                            for u in range(3):
                                uu[2 + u] = r4_verts[f * 3 + u]
                            uu[5] = r3_verts[i * 3]
                            uu[6] = r3_verts[i * 3 + 1]
                            uu[7] = r3_verts[j * 3]
                            uu[8] = r3_verts[j * 3 + 1]
                            cnt = _count_inside(uu, 9, lz, lx, ly, nloc, 8)
                            if cnt >= 8:
                                n_rows = _theta_emit(out, max_rows, n_rows,
                                                     h1, h2, 1, uu, 9)
    return n_rows


if USE_NUMBA:
    _pair_lookup = njit(cache=True)(_pair_lookup)
    _emit = njit(cache=True)(_emit)
    _gate_tail = njit(cache=True)(_gate_tail)
    _gate_try_pair = njit(cache=True)(_gate_try_pair)
    _gate = njit(cache=True)(_gate)
    _probe_vertex = njit(cache=True)(_probe_vertex)
    _lazy = njit(cache=True)(_lazy)
    _scan = njit(cache=True)(_scan)
    _ring_chains = njit(cache=True)(_ring_chains)
    _in_small = njit(cache=True)(_in_small)
    _rows_disjoint = njit(cache=True)(_rows_disjoint)
    _count_inside = njit(cache=True)(_count_inside)
    _theta_emit = njit(cache=True)(_theta_emit)
    _theta_pairs = njit(cache=True)(_theta_pairs)


def layered_scan(edges: np.ndarray, n: int, thresholds, kmax: int, budget: int,
                 gate: bool, mode: int, max_rec: int = 1 << 16):
    """Run the scan over an (m, w) int32 edge array.

    thresholds[j] is the largest span counting as a hit at subset size j,
    -1 for no hit at that size.  Returns a list of records
    (size, span, edge_ids, vertices); in MODE_FIRST at most one record.
    """
    edges = np.ascontiguousarray(edges, dtype=np.int32)
    m, w = edges.shape
    if w < 3:
        raise ValueError("scan requires edges of size >= 3")
    T = np.asarray(thresholds, dtype=np.int64)
    if T.shape[0] != kmax + 1:
        raise ValueError("thresholds must have length kmax+1")
    if m == 0:
        return []
    indptr, eids = build_vertex_csr(edges, n)
    pkeys, pptr, peids = build_pair_table(edges, n)
    vcap = int(max(int(T.max()), w)) + 4
    stride = 2 + kmax + vcap
    while True:
        out = np.empty(max_rec * stride, dtype=np.int32)
        cnt = _scan(edges, indptr, eids, pkeys, pptr, peids,
                    T, kmax, budget, 1 if gate else 0, mode, out, max_rec,
                    stride, vcap)
        if cnt <= max_rec or mode == MODE_FIRST:
            break
        max_rec = int(cnt) + 1024
    recs = []
    for i in range(int(min(cnt, max_rec))):
        base = i * stride
        size = int(out[base])
        span = int(out[base + 1])
        es = tuple(int(x) for x in out[base + 2: base + 2 + kmax] if x >= 0)
        vs = tuple(int(x) for x in out[base + 2 + kmax: base + 2 + kmax + vcap]
                   if x >= 0)
        recs.append((size, span, es, vs))
    return recs


def ring_scan(a_src, a_ctr, a_dst, a_cost, occ_ptr, occ_flat, nv: int,
              dist: np.ndarray, i_max: int, max_rows: int = 1 << 17):
    """Vertex sets of closed detour-arc chains (candidate ring spans).

    Arc i runs a_src[i] -> a_dst[i] inside the end-pair graph of center
    a_ctr[i]; occ_ptr/occ_flat list its occupied vertices (center plus
    interior).  dist is a dense (nv, nv) distance table truncated at
    values above the arc allowance.  Returns a set of sorted vertex
    tuples; duplicates across growth directions are merged here.
    """
    na = int(a_src.shape[0])
    if na == 0:
        return set()
    lmax = min(8, i_max)
    keys = a_src.astype(np.int64) * nv + a_ctr.astype(np.int64)
    order = np.lexsort((a_cost, keys))
    counts = np.bincount(keys, minlength=nv * nv)
    pool_ptr = np.zeros(nv * nv + 1, dtype=np.int64)
    np.cumsum(counts, out=pool_ptr[1:])
    pool_eids = order.astype(np.int32)
    seed_ptr = np.zeros(nv + 1, dtype=np.int64)
    np.cumsum(np.bincount(a_src, minlength=nv), out=seed_ptr[1:])
    seed_eids = np.argsort(a_src, kind="stable").astype(np.int32)
    vcap = i_max + 1
    while True:
        out = np.empty(max_rows * vcap, dtype=np.int32)
        cnt = _ring_chains(a_ctr, a_dst, a_cost, occ_ptr, occ_flat,
                           pool_ptr, pool_eids, seed_ptr, seed_eids,
                           dist, nv, i_max, lmax, out, max_rows, vcap)
        if cnt <= max_rows:
            break
        max_rows = int(cnt) + 1024
    spans = set()
    for i in range(int(cnt)):
        base = i * vcap
        spans.add(tuple(int(x) for x in out[base: base + vcap] if x >= 0))
    return spans


def theta_pair_scan(hp_h1, hp_h2, hp_flags, r3_ptr, r3_verts, r3_len, r3_cost,
                    r4_ptr, r4_verts, m2_ptr, m2_flat, cptr, cends,
                    b333: int, i_max: int, max_rows: int = 1 << 15):
    """Theta candidates over prepared hub pairs.

    Flag bits per pair select the branch layouts to try (1: three
    3-branches, 2: two 4-branches and a middle, 4: one 4-branch and two
    3-branches).  cptr/cends index path end pairs by centre vertex.
    Returns rows (h1, h2, flag, verts); flag bit 0 marks an accepted
    span, bit 1 a near miss worth probing for a hub tree vertex.
    """
    if hp_h1.shape[0] == 0:
        return []
    ucap = int(2 + 3 * np.max(np.diff(r3_ptr), initial=0)
               + 3 * np.max(np.diff(r4_ptr), initial=0)
               + np.max(np.diff(m2_ptr), initial=0))
    npaths = int(cends.shape[0]) // 2
    while True:
        out = np.empty(max_rows * 13, dtype=np.int32)
        cnt = _theta_pairs(hp_h1, hp_h2, hp_flags,
                           r3_ptr, r3_verts, r3_len, r3_cost,
                           r4_ptr, r4_verts, m2_ptr, m2_flat,
                           cptr, cends, b333, i_max, ucap, npaths,
                           out, max_rows)
        if cnt <= max_rows:
            break
        max_rows = int(cnt) + 1024
    rows = []
    for i in range(int(cnt)):
        base = i * 13
        verts = tuple(int(x) for x in out[base + 4: base + 13] if x >= 0)
        rows.append((int(out[base]), int(out[base + 1]),
                     int(out[base + 2]), verts))
    return rows
