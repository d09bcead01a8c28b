import itertools

import numpy as np
import pytest

from bes.claims import (
    TightnessError,
    claim_budget,
    claim_levels_tight,
    claim_set,
    claimed_pairs,
    pairs_leq_t,
    sumset_contains,
)
from bes.hypergraph import Hypergraph

from helpers import random_sparse_graph, random_tree


def brute_claim_set(edges, r, pair, i_max):
    """Direct witness enumeration, the oracle for claim_set."""
    out = {0}
    m = len(edges)
    for i in range(1, min(i_max, m) + 1):
        budget = r * i - 2 * i + 2
        for sub in itertools.combinations(range(m), i):
            u = set(pair)
            for e in sub:
                u.update(edges[e])
            if len(u) <= budget:
                out.add(i)
                break
    return frozenset(out)


def test_budget_values():
    assert [claim_budget(3, i) for i in range(5)] == [2, 3, 4, 5, 6]
    assert [claim_budget(4, i) for i in range(5)] == [2, 4, 6, 8, 10]
    assert [claim_budget(5, i) for i in range(4)] == [2, 5, 8, 11]


def test_single_edge():
    g = Hypergraph.from_edges(3, [(0, 1, 2)])
    assert claim_set(g, (0, 1)) == {0, 1}
    assert claim_set(g, (0, 3)) == {0}


def test_two_edges_sharing_a_pair():
    g = Hypergraph.from_edges(3, [(0, 1, 2), (0, 1, 3)])
    assert claim_set(g, (0, 1)) == {0, 1, 2}
    assert claim_set(g, (2, 3)) == {0, 2}
    assert claim_set(g, (0, 2)) == {0, 1, 2}


def test_witness_may_be_disconnected_and_far_from_pair():
    # K4 block plus one far edge: the pair (0, 4) is 5-claimed only via
    # all five edges, which no search localized around the pair would see
    g = Hypergraph.from_edges(
        3, [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3), (4, 5, 6)])
    cs = claim_set(g, (0, 4), i_max=5)
    assert 5 in cs
    # the dense block alone leaves budget room for both outside vertices
    assert claim_set(g, (7, 8), i_max=5) == {0, 4}


def test_matches_brute_force_on_random_graphs():
    rng = np.random.default_rng(7)
    for _ in range(60):
        n, edges = random_sparse_graph(rng, m_hi=9)
        g = Hypergraph.from_edges(3, edges, n=n)
        pair = tuple(sorted(rng.choice(n + 1, size=2, replace=False).tolist()))
        assert claim_set(g, pair, i_max=6) == brute_claim_set(
            edges, 3, pair, 6)


def test_matches_brute_force_r4():
    rng = np.random.default_rng(11)
    for _ in range(25):
        n = int(rng.integers(6, 10))
        m = int(rng.integers(2, 7))
        edges = set()
        while len(edges) < m:
            e = tuple(sorted(rng.choice(n, size=4, replace=False).tolist()))
            edges.add(e)
        edges = sorted(edges)
        g = Hypergraph.from_edges(4, edges, n=n)
        pair = tuple(sorted(rng.choice(n, size=2, replace=False).tolist()))
        assert claim_set(g, pair, i_max=5) == brute_claim_set(
            edges, 4, pair, 5)


def test_one_claimed_iff_in_shadow():
    rng = np.random.default_rng(3)
    for _ in range(20):
        n, edges = random_sparse_graph(rng)
        g = Hypergraph.from_edges(3, edges, n=n)
        assert claimed_pairs(g, require={1}) == g.shadow()


def test_claimed_pairs_filters():
    g = Hypergraph.from_edges(3, [(0, 1, 2), (0, 1, 3)])
    assert claimed_pairs(g, require={2}, avoid={1}) == {(2, 3)}
    assert pairs_leq_t(g, 1) == g.shadow()
    assert pairs_leq_t(g, 2) == g.shadow() | {(2, 3)}


def test_tight_levels_match_claim_set_on_trees():
    rng = np.random.default_rng(5)
    for r in (3, 4, 5):
        for _ in range(12):
            size = int(rng.integers(1, 6))
            n, edges = random_tree(r, size, rng)
            g = Hypergraph.from_edges(r, edges, n=n)
            marks = claim_levels_tight(g, i_max=min(6, size))
            verts = sorted({v for e in edges for v in e})
            for a in range(len(verts)):
                for b in range(a + 1, len(verts)):
                    p = (verts[a], verts[b])
                    cs = claim_set(g, p, i_max=min(6, size))
                    got = {
                        i for i in range(1, min(6, size) + 1)
                        if marks.get(p, 0) >> i & 1
                    }
                    assert got == {i for i in cs if i >= 1}, (edges, p)


def test_tightness_error_below_floor():
    g = Hypergraph.from_edges(3, [(0, 1, 2), (0, 1, 3), (0, 2, 3)])
    with pytest.raises(TightnessError):
        claim_levels_tight(g, i_max=3)


def test_diamond_marks_outer_pair_at_level_two():
    g = Hypergraph.from_edges(3, [(0, 1, 2), (0, 1, 3)])
    marks = claim_levels_tight(g, i_max=2)
    assert marks[(2, 3)] == 0b100
    assert marks[(0, 1)] & 0b010


def test_sumset():
    assert sumset_contains([{0, 1}, {0, 1}], 2)
    assert sumset_contains([{0, 1}, {0, 2}], 3)
    assert not sumset_contains([{0, 3}, {0, 3}], 5)
    assert sumset_contains([{0, 3}, {0, 3}], 6)
    assert not sumset_contains([], 1)
    assert sumset_contains([], 0)
