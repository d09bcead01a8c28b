"""Two-share components, tree structure, and the merge closure."""

import numpy as np
import pytest

from bes.claims import claimed_pairs
from bes.hypergraph import Hypergraph
from bes.merging import (
    MergeEvent,
    Partition,
    flexible_edges,
    is_tree,
    merge_clusters,
    mergeable_pairs,
    part_shadow,
    trimming_order,
    two_but_not_one_claimed,
    two_share_components,
)

from helpers import random_path, random_tree


def tree_graph(r, size, rng):
    n, edges = random_tree(r, size, rng)
    return Hypergraph.from_edges(r, edges)


def test_two_share_components_known():
    g = Hypergraph.from_edges(3, [(0, 1, 2), (0, 1, 3), (2, 3, 6),
                                  (4, 5, 6), (4, 5, 7), (0, 6, 7)])
    assert two_share_components(g).parts == ((0, 1), (2,), (3,), (4, 5))

    k4 = Hypergraph.from_edges(3, [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)])
    assert two_share_components(k4).parts == ((0, 1, 2, 3),)


def test_partition_rejects_overlap():
    with pytest.raises(ValueError):
        Partition.from_groups([(0, 1), (1, 2)])


@pytest.mark.parametrize("r", [3, 4, 5])
def test_tree_identities(r):
    rng = np.random.default_rng(100 + r)
    for _ in range(40):
        size = int(rng.integers(1, 8))
        g = tree_graph(r, size, rng)
        part = list(range(g.m))
        assert is_tree(g)
        # covered pairs: each edge past the first repeats only its glue pair
        cov = part_shadow(g, part)
        assert len(cov) == size * r * (r - 1) // 2 - size + 1
        open_pairs = two_but_not_one_claimed(g, part)
        assert len(open_pairs) >= (size - 1) * (r - 2) ** 2
        flex = flexible_edges(g, part)
        assert len(flex) == 1 if size == 1 else len(flex) >= 2
        order = trimming_order(g, part)
        assert sorted(order) == part
        for t in range(1, size + 1):
            assert is_tree(g, order[:t])


@pytest.mark.parametrize("r", [3, 4, 5])
def test_path_equality(r):
    rng = np.random.default_rng(200 + r)
    for _ in range(25):
        size = int(rng.integers(2, 8))
        n, edges = random_path(r, size, rng)
        g = Hypergraph.from_edges(r, edges)
        open_pairs = two_but_not_one_claimed(g, range(g.m))
        assert len(open_pairs) == (size - 1) * (r - 2) ** 2


@pytest.mark.parametrize("r", [3, 4])
def test_open_pairs_match_full_claim_route(r):
    # the level enumerator against the exhaustive claim-set definition
    rng = np.random.default_rng(300 + r)
    for _ in range(15):
        g = tree_graph(r, int(rng.integers(1, 5)), rng)
        fast = two_but_not_one_claimed(g, range(g.m))
        slow = claimed_pairs(g, require={2}, avoid={1})
        assert fast == frozenset(slow)


def test_merge_single_cover_edge():
    # lone edge covering the open pair of a separate two-edge tree
    g = Hypergraph.from_edges(3, [(0, 4, 5), (2, 3, 4), (2, 3, 5)])
    res = merge_clusters(g)
    assert res.initial.parts == ((0,), (1, 2))
    assert res.final.parts == ((0, 1, 2),)
    assert res.events == (MergeEvent(0, 1, (4, 5)),)
    assert res.composition_of(0) == (2, 1)


def test_merge_consumed_pair():
    # second tree covers the first tree's open pair; one event, one part
    g = Hypergraph.from_edges(3, [(0, 1, 2), (0, 1, 3), (2, 3, 4), (2, 3, 5)])
    res = merge_clusters(g)
    assert res.final.parts == ((0, 1, 2, 3),)
    assert len(res.events) == 1
    assert res.composition_of(0) == (2, 2)


def test_merge_two_disjoint_chains():
    g = Hypergraph.from_edges(3, [(0, 1, 2), (0, 1, 3), (2, 3, 6),
                                  (4, 5, 6), (4, 5, 7), (0, 6, 7)])
    res = merge_clusters(g)
    assert res.final.parts == ((0, 1, 3), (2, 4, 5))
    assert sorted(res.composition_of(i) for i in range(2)) == [(2, 1), (2, 1)]


def test_merge_nothing_to_do():
    g = Hypergraph.from_edges(3, [(0, 1, 2), (3, 4, 5)])
    res = merge_clusters(g)
    assert res.initial == res.final
    assert res.events == ()


def test_mergeable_pairs_direction():
    g = Hypergraph.from_edges(3, [(0, 4, 5), (2, 3, 4), (2, 3, 5)])
    assert mergeable_pairs(g, [0], [1, 2]) == frozenset({(4, 5)})
    # the reverse orientation has nothing: a lone edge never 2-claims
    assert mergeable_pairs(g, [1, 2], [0]) == frozenset()


def random_merge_instance(rng):
    """Disjoint random trees plus edges covering some of their open pairs."""
    r = int(rng.choice([3, 4]))
    edges = []
    offset = 0
    open_pool = []
    for _ in range(int(rng.integers(2, 4))):
        n, tre = random_tree(r, int(rng.integers(1, 4)), rng)
        shifted = [tuple(v + offset for v in e) for e in tre]
        edges.extend(shifted)
        g1 = Hypergraph.from_edges(r, shifted)
        open_pool.extend(two_but_not_one_claimed(g1, range(g1.m)))
        offset += n
    nc = int(rng.integers(0, 3))
    for _ in range(nc):
        if not open_pool:
            break
        u, v = open_pool[int(rng.integers(0, len(open_pool)))]
        extra = list(range(offset, offset + r - 2))
        offset += r - 2
        edges.append(tuple(sorted([u, v] + extra)))
    return Hypergraph.from_edges(r, edges)


def test_merge_order_independence():
    rng = np.random.default_rng(4242)
    for _ in range(12):
        g = random_merge_instance(rng)
        base = merge_clusters(g)
        comps = sorted(base.composition_of(i) for i in range(len(base.final)))
        for _ in range(8):
            alt = merge_clusters(g, order="rng", rng=rng)
            assert alt.final == base.final
            assert alt.initial == base.initial
            assert sorted(
                alt.composition_of(i) for i in range(len(alt.final))) == comps


def test_merge_order_validation():
    g = Hypergraph.from_edges(3, [(0, 1, 2)])
    with pytest.raises(ValueError):
        merge_clusters(g, order="sorted")
    with pytest.raises(ValueError):
        merge_clusters(g, order="rng")


def test_is_tree_rejections():
    k4 = Hypergraph.from_edges(3, [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)])
    assert not is_tree(k4)
    # disconnected
    g = Hypergraph.from_edges(3, [(0, 1, 2), (3, 4, 5)])
    assert not is_tree(g)
    # connected but span too low: third edge adds only one fresh vertex
    g2 = Hypergraph.from_edges(3, [(0, 1, 2), (0, 1, 3), (1, 2, 3)])
    assert not is_tree(g2)


def test_trimming_order_rejects_disconnected():
    g = Hypergraph.from_edges(3, [(0, 1, 2), (3, 4, 5)])
    with pytest.raises(ValueError):
        trimming_order(g, [0, 1])
