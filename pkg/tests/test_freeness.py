import itertools

import numpy as np
import pytest

from bes.freeness import (
    ForbiddenFamily,
    find_any_level,
    find_configuration,
    floor_certificate,
    is_free,
    scan_violations,
)
from bes.hypergraph import Hypergraph

from helpers import random_path, random_sparse_graph


def test_crowded_family_levels():
    fam = ForbiddenFamily.crowded(3, 8)
    lm = fam.level_map()
    assert lm == {2: 3, 3: 4, 4: 5, 5: 6, 6: 7, 7: 8, 8: 10}
    assert fam.max_size == 8
    assert fam.slack() == 0
    fam4 = ForbiddenFamily.crowded(4, 8)
    assert fam4.level_map()[2] == 5
    assert fam4.level_map()[8] == 18


def test_floor_family():
    fam = ForbiddenFamily.floor(3, 8)
    assert fam.level_map() == {j: j + 1 for j in range(2, 9)}
    assert fam.slack() == -1


def test_find_configuration_small():
    g = Hypergraph.from_edges(3, [(0, 1, 2), (0, 1, 3), (4, 5, 6)])
    assert find_configuration(g, 2, 4) == (0, 1)
    assert find_configuration(g, 2, 3) is None
    assert find_configuration(g, 3, 6) is None
    assert find_configuration(g, 3, 7) == (0, 1, 2)


def test_find_configuration_rejects_large_input():
    edges = [(i, i + 1, i + 2) for i in range(30)]
    g = Hypergraph.from_edges(3, edges)
    with pytest.raises(ValueError):
        find_configuration(g, 2, 4)


def test_paths_are_free_until_the_crowded_top_level():
    rng = np.random.default_rng(9)
    fam = ForbiddenFamily.crowded(3, 8)
    for _ in range(10):
        n, edges = random_path(3, 8, rng)
        g = Hypergraph.from_edges(3, edges, n=n)
        # an 8-edge path spans 10 vertices and hits the slack-0 top level
        assert not is_free(g, fam, method="exact")
        assert is_free(g.subgraph(range(7)), fam, method="exact")


def test_exact_and_scan_agree_on_floor_family():
    rng = np.random.default_rng(17)
    fam = ForbiddenFamily.floor(3, 8)
    for _ in range(60):
        n, edges = random_sparse_graph(rng)
        g = Hypergraph.from_edges(3, edges, n=n)
        assert is_free(g, fam, method="exact") == is_free(
            g, fam, method="scan"), edges


def test_scan_violation_records_are_real():
    rng = np.random.default_rng(23)
    fam = ForbiddenFamily.floor(3, 8)
    for _ in range(30):
        n, edges = random_sparse_graph(rng)
        g = Hypergraph.from_edges(3, edges, n=n)
        for v in scan_violations(g, fam, first_only=False):
            assert g.span(v.edges) == v.span <= fam.level_map()[v.size]


def test_floor_certificate():
    n, edges = random_path(3, 8, np.random.default_rng(1))
    g = Hypergraph.from_edges(3, edges, n=n)
    assert floor_certificate(g) is None
    # three edges on four vertices, glued to the first path edge
    extra = [(0, 1, n), (0, 2, n)]
    g2 = Hypergraph.from_edges(3, list(edges) + extra)
    cert = floor_certificate(g2)
    assert cert is not None
    assert g2.span(cert.edges) == cert.span <= cert.size + 1


def test_family_mismatch_rejected():
    g = Hypergraph.from_edges(3, [(0, 1, 2)])
    with pytest.raises(ValueError):
        is_free(g, ForbiddenFamily.crowded(4, 8))
    with pytest.raises(ValueError):
        scan_violations(
            Hypergraph.from_edges(4, [(0, 1, 2, 3)]),
            ForbiddenFamily.crowded(4, 8))
