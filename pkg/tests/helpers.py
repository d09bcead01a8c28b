"""Shared random generators for the test suite."""

import numpy as np


def random_sparse_graph(rng, n_lo=5, n_hi=11, m_hi=15):
    """Random 3-uniform edge list; m is capped by C(n, 3)."""
    n = int(rng.integers(n_lo, n_hi))
    mmax = n * (n - 1) * (n - 2) // 6
    m = min(int(rng.integers(2, m_hi)), mmax)
    edges = set()
    while len(edges) < m:
        e = tuple(sorted(rng.choice(n, size=3, replace=False).tolist()))
        edges.add(e)
    return n, sorted(edges)


def random_tree(r, size, rng):
    """Tree-grown r-graph: every edge after the first takes two vertices
    from one existing edge and brings r-2 fresh ones.  Returns (n, edges)."""
    edges = [tuple(range(r))]
    nv = r
    for _ in range(size - 1):
        host = edges[int(rng.integers(0, len(edges)))]
        a, b = (int(x) for x in rng.choice(len(host), size=2, replace=False))
        e = tuple(sorted([host[a], host[b]] + list(range(nv, nv + r - 2))))
        edges.append(e)
        nv += r - 2
    return nv, edges


def random_path(r, size, rng):
    """Path-grown r-graph: every edge glues to two vertices of the
    previous edge, at least one of them fresh to that edge, so that
    non-consecutive edges never share two vertices."""
    edges = [tuple(range(r))]
    nv = r
    for t in range(size - 1):
        host = edges[-1]
        fresh = [v for v in host if v >= nv - (r - 2)] if t else list(host)
        a = fresh[int(rng.integers(0, len(fresh)))]
        others = [v for v in host if v != a]
        b = others[int(rng.integers(0, len(others)))]
        e = tuple(sorted([a, b] + list(range(nv, nv + r - 2))))
        edges.append(e)
        nv += r - 2
    return nv, edges
