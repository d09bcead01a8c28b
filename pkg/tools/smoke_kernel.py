"""Cross-check the layered scan against brute-force subset search."""

import itertools
import os
import sys

import numpy as np

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from bes import _kernels  # noqa: E402


def brute_hits(edges, kmax, thresholds):
    m = len(edges)
    hits = []
    for j in range(1, min(kmax, m) + 1):
        if thresholds[j] < 0:
            continue
        for sub in itertools.combinations(range(m), j):
            span = len(set().union(*[edges[e] for e in sub]))
            if span <= thresholds[j]:
                hits.append(frozenset(sub))
    return hits


def minimal(hits):
    out = []
    for h in hits:
        if not any(o < h for o in hits if o != h):
            out.append(h)
    return out


def connected(edges, sub):
    sets = [set(edges[e]) for e in sub]
    seen = [False] * len(sets)
    stack = [0]
    seen[0] = True
    while stack:
        i = stack.pop()
        for j in range(len(sets)):
            if not seen[j] and sets[i] & sets[j]:
                seen[j] = True
                stack.append(j)
    return all(seen)


def brute_mark(edges, kmax, thresholds):
    m = len(edges)
    out = set()
    for j in range(1, min(kmax, m) + 1):
        if thresholds[j] < 0:
            continue
        for sub in itertools.combinations(range(m), j):
            span = len(set().union(*[edges[e] for e in sub]))
            if span <= thresholds[j] and connected(edges, sub):
                out.add(frozenset(sub))
    return out


def main():
    rng = np.random.default_rng(12345)
    bad = 0
    trials = 400
    for trial in range(trials):
        n = int(rng.integers(5, 11))
        m = int(rng.integers(2, 15))
        m = min(m, n * (n - 1) * (n - 2) // 6)
        edges = set()
        while len(edges) < m:
            e = tuple(sorted(rng.choice(n, size=3, replace=False).tolist()))
            edges.add(e)
        edges = sorted(edges)
        m = len(edges)
        kmax = 8
        # floor thresholds: span <= j+1 for j in [2, 8]
        T = [-1, -1] + [j + 1 for j in range(2, kmax + 1)]
        arr = np.array(edges, dtype=np.int32)
        bh = brute_hits(edges, kmax, T)
        recs = _kernels.layered_scan(arr, n, T, kmax, 2, True,
                                     _kernels.MODE_FIRST)
        if bool(recs) != bool(bh):
            bad += 1
            print(f"[{trial}] FIRST mismatch: scan={bool(recs)} brute={bool(bh)}")
            print("  edges:", edges)
            continue
        recs = _kernels.layered_scan(arr, n, T, kmax, 2, True,
                                     _kernels.MODE_COLLECT)
        got = {frozenset(r[2]) for r in recs}
        # sanity: every record is a genuine hit
        for size, span, es, vs in recs:
            sp = len(set().union(*[edges[e] for e in es]))
            assert sp == span <= T[size], (edges, es, span, sp)
            assert len(es) == size
        missing = [h for h in minimal(bh) if h not in got]
        if missing:
            bad += 1
            print(f"[{trial}] COLLECT missing minimal hits: {missing}")
            print("  edges:", edges)
        # marking thresholds: every connected subset of t <= 4 edges
        # spanning at most t+2 vertices must be recorded
        TM = [-1, 3, 4, 5, 6]
        recs = _kernels.layered_scan(arr, n, TM, 4, 1, False,
                                     _kernels.MODE_MARK, max_rec=1 << 18)
        gotm = {frozenset(r[2]) for r in recs}
        bm = brute_mark(edges, 4, TM)
        if gotm != bm:
            bad += 1
            print(f"[{trial}] MARK mismatch: extra={gotm - bm} missing={bm - gotm}")
            print("  edges:", edges)
    print(f"done: {trials} trials, {bad} failures, backend={_kernels.backend()}")
    return 1 if bad else 0


if __name__ == "__main__":
    raise SystemExit(main())
