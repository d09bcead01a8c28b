"""Minimal dense subsets of 2-path families: the shape searches against
brute-force subset enumeration."""

import random

import pytest
from hypothesis import given, settings, strategies as st

from bes import _kernels, dense
from bes.construction import all_two_paths, pg2_incidence
from bes.dense import (
    GirthError,
    brute_minimal_dense,
    cycle_witnesses,
    detour_arcs,
    duplicate_witnesses,
    is_dense,
    is_minimal_dense,
    minimal_dense_sets,
    ring_candidate_spans,
    ring_dense_sets,
    short_cycle_exists,
    span_of,
    structured_minimal_dense,
    theta_candidate_spans,
    theta_dense_sets,
    union_adjacency,
)


# ---------------------------------------------------------------------------
# basic predicates


def test_span_and_density_predicates():
    fam = [(0, 1, 2), (0, 2, 3), (0, 3, 1), (5, 6, 7)]
    assert span_of(fam, [0, 1]) == {0, 1, 2, 3}
    assert not is_dense(fam, (0, 1))
    assert is_dense(fam, (0, 1, 2))
    assert is_minimal_dense(fam, (0, 1, 2))
    assert not is_minimal_dense(fam, (0, 1))


def test_brute_rejects_large_families():
    fam = [(i, i + 100, i + 200) for i in range(dense.BRUTE_LIMIT + 1)]
    with pytest.raises(ValueError):
        brute_minimal_dense(fam)


# ---------------------------------------------------------------------------
# handcrafted witnesses, one per shape class
#
# Each entry was verified against brute enumeration before freezing; the
# parametrized test keeps checking both routes against the frozen answer.

HEXAGON = [(i, (i - 1) % 6, (i + 1) % 6) for i in range(1, 6)]
FIXTURES = {
    # duplicated vertex set: the only dense pair
    "duplicate_pair": (
        [(0, 1, 2), (0, 2, 1), (3, 4, 5)],
        [(0, 1)],
    ),
    # three paths at one centre covering a triangle of end-pairs
    "claw": (
        [(0, 1, 2), (0, 2, 3), (0, 3, 1)],
        [(0, 1, 2)],
    ),
    # 4-cycle of end-pairs at one centre
    "end_pair_square": (
        [(9, 1, 2), (9, 2, 3), (9, 3, 4), (9, 4, 1)],
        [(0, 1, 2, 3)],
    ),
    # the square plus a chord: the square stays minimal because the
    # chord path is not part of the subset
    "end_pair_square_chord": (
        [(9, 1, 2), (9, 2, 3), (9, 3, 4), (9, 4, 1), (9, 1, 3)],
        [(0, 1, 4), (2, 3, 4), (0, 1, 2, 3)],
    ),
    # five paths walking a hexagon: one uncentered vertex
    "hexagon_ring": (HEXAGON, [(0, 1, 2, 3, 4)]),
    # hexagon ring with one centre detouring through a private vertex
    "fattened_hexagon": (
        [(1, 0, 7), (1, 7, 2), (2, 1, 3), (3, 2, 4), (4, 3, 5), (5, 4, 0)],
        [(0, 1, 2, 3, 4, 5)],
    ),
    # seven-cycle ring
    "heptagon_ring": (
        [(i, i - 1, (i + 1) % 7) for i in range(1, 7)],
        [(0, 1, 2, 3, 4, 5)],
    ),
    # two hubs joined by three 2-edge arcs
    "theta_333": (
        [(0, 2, 4), (0, 4, 6), (1, 3, 5), (1, 5, 7), (2, 0, 3), (6, 0, 7),
         (4, 0, 5)],
        [(0, 1, 2, 3, 4, 5, 6)],
    ),
    # arcs of four, four, and two edges between the hubs
    "theta_442": (
        [(3, 0, 4), (4, 3, 5), (5, 4, 1), (6, 0, 7), (7, 6, 8), (8, 7, 1),
         (0, 2, 6), (1, 2, 5)],
        [(0, 1, 2, 3, 4, 5, 6, 7)],
    ),
    # arcs of four, three, and three edges; odd cycles, so only possible
    # off the bipartite bases
    "theta_433": (
        [(2, 0, 3), (3, 2, 4), (4, 3, 1), (5, 0, 6), (6, 5, 1), (7, 0, 8),
         (0, 5, 7), (1, 4, 8)],
        [(0, 1, 2, 3, 4, 5, 6, 7)],
    ),
    # theta(3,3,3) plus a ninth vertex hanging on a hub by two paths
    "theta_333_hub_vertex": (
        [(0, 2, 8), (0, 4, 8), (0, 6, 8), (1, 3, 5), (1, 5, 7), (2, 0, 3),
         (4, 0, 5), (6, 0, 7)],
        [(0, 1, 2, 3, 4, 5, 6, 7)],
    ),
}


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_shape_fixtures(name):
    fam, expected = FIXTURES[name]
    assert not short_cycle_exists(union_adjacency(fam))
    assert brute_minimal_dense(fam) == expected
    assert minimal_dense_sets(fam, method="structured") == expected


def test_witnesses_are_minimal_dense():
    for fam, expected in FIXTURES.values():
        for idxs in expected:
            assert is_minimal_dense(fam, idxs)


# ---------------------------------------------------------------------------
# individual streams


def test_duplicate_witnesses_compare_vertex_sets():
    assert duplicate_witnesses([(0, 1, 2), (0, 2, 1), (3, 4, 5)]) == [(0, 1)]
    # a different centre on the same three vertices still spans only three
    assert duplicate_witnesses([(0, 1, 2), (1, 0, 2)]) == [(0, 1)]
    assert duplicate_witnesses([(0, 1, 2), (0, 2, 3)]) == []


def test_cycle_witnesses_full_vs_chordless():
    fam, _expected = FIXTURES["end_pair_square_chord"]
    full = set(cycle_witnesses(fam))
    assert full == {(0, 1, 4), (2, 3, 4), (0, 1, 2, 3)}
    # chordless-only mode drops the square but keeps the triangles
    assert set(cycle_witnesses(fam, induced_only=True)) == \
        {(0, 1, 4), (2, 3, 4)}


def test_cycle_witnesses_respect_i_max():
    fam, _expected = FIXTURES["end_pair_square"]
    assert cycle_witnesses(fam, i_max=3) == []
    assert cycle_witnesses(fam, i_max=4) == [(0, 1, 2, 3)]


def test_detour_arcs_cover_both_orientations():
    arcs = detour_arcs([(5, 0, 1)], max_cost=0)
    assert {(a.src, a.dst) for a in arcs} == {(0, 1), (1, 0)}
    assert all(a.ctr == 5 and a.cost == 0 for a in arcs)


def test_ring_stream_finds_hexagon():
    spans = ring_candidate_spans(HEXAGON)
    assert frozenset(range(6)) in spans
    assert ring_dense_sets(HEXAGON) == [(0, 1, 2, 3, 4)]


def test_theta_stream_finds_all_three_shapes():
    for name in ("theta_333", "theta_442", "theta_433",
                 "theta_333_hub_vertex"):
        fam, expected = FIXTURES[name]
        spans = theta_candidate_spans(fam)
        assert span_of(fam, expected[0]) in spans, name
        assert theta_dense_sets(fam) == expected, name


def test_streams_quiet_on_sparse_family():
    # a long path has no dense subset at all
    fam = [(i, i - 1, i + 1) for i in range(1, 20, 2)]
    assert minimal_dense_sets(fam, method="structured") == []
    assert ring_candidate_spans(fam) == set()
    assert theta_candidate_spans(fam) == set()


# ---------------------------------------------------------------------------
# dispatch


def test_method_dispatch_and_validation():
    triangle = [(0, 1, 2), (1, 0, 2)]
    assert short_cycle_exists(union_adjacency(triangle))
    assert minimal_dense_sets(triangle, method="auto") == [(0, 1)]
    with pytest.raises(GirthError):
        minimal_dense_sets(triangle, method="structured")
    with pytest.raises(ValueError):
        minimal_dense_sets(triangle, i_max=9)
    with pytest.raises(ValueError):
        minimal_dense_sets(triangle, method="fast")


def test_low_girth_large_family_raises():
    fam = [(0, 1, 2), (1, 0, 2)]
    fam += [(100 + i, 200 + i, 300 + i) for i in range(dense.BRUTE_LIMIT)]
    with pytest.raises(GirthError):
        minimal_dense_sets(fam)


# ---------------------------------------------------------------------------
# cross-validation on projective bases
#
# Subfamilies of an incidence graph's 2-paths keep union girth >= 6, so
# the structured search must reproduce brute enumeration exactly.


def pg_pool(q):
    base = pg2_incidence(q)
    return [(p.center, p.ends[0], p.ends[1]) for p in all_two_paths(base)]


@pytest.mark.parametrize("q,seed", [(2, s) for s in range(12)]
                         + [(3, s) for s in range(12)])
def test_structured_matches_brute_on_plane_samples(q, seed):
    pool = pg_pool(q)
    rng = random.Random(7000 * q + seed)
    fam = rng.sample(pool, rng.randint(10, 22))
    assert minimal_dense_sets(fam, method="structured") == \
        brute_minimal_dense(fam)


def test_wide_family_small_witnesses():
    # a larger sample, checked only up to size 3 where enumeration is cheap
    from itertools import combinations

    pool = pg_pool(3)
    fam = random.Random(4242).sample(pool, 60)
    expected = [s for s in combinations(range(60), 2) if is_dense(fam, s)]
    pairs = set(expected)
    for s in combinations(range(60), 3):
        if is_dense(fam, s) and not any(
                p for p in combinations(s, 2) if p in pairs):
            expected.append(s)
    got = [w for w in minimal_dense_sets(fam, method="structured")
           if len(w) <= 3]
    assert got == sorted(expected, key=lambda t: (len(t), t))
    assert any(len(w) == 3 for w in got)


@pytest.mark.skipif(not _kernels.USE_NUMBA,
                    reason="compiled kernels disabled")
@pytest.mark.parametrize("q,seed", [(2, 0), (2, 1), (2, 2),
                                    (3, 0), (3, 1), (3, 2)])
def test_ring_kernel_matches_bitmask_walk(q, seed):
    pool = pg_pool(q)
    rng = random.Random(100 * q + seed)
    fam = rng.sample(pool, rng.randint(30, min(80, len(pool))))
    arcs = dense.detour_arcs(fam, 3)
    dist = dense.bfs_distances(union_adjacency(fam), 8)
    nv = 1 + max(max(a.src, a.ctr, a.dst) for a in arcs)
    assert dense._ring_spans_kernel(arcs, dist, nv, 8, 8) == \
        dense._ring_spans_py(arcs, dist, nv, 8, 8)


@pytest.mark.skipif(not _kernels.USE_NUMBA,
                    reason="compiled kernels disabled")
@pytest.mark.parametrize("q,seed", [(2, 0), (2, 1), (2, 2),
                                    (3, 0), (3, 1), (3, 2)])
def test_theta_kernel_matches_bitmask_assembly(q, seed):
    pool = pg_pool(q)
    rng = random.Random(300 * q + seed)
    fam = rng.sample(pool, rng.randint(30, min(80, len(pool))))
    arcs = dense.detour_arcs(fam, 1)
    assert dense._theta_spans_kernel(fam, 8, arcs) == \
        dense._theta_spans_py(fam, 8, arcs)


@pytest.mark.skipif(not _kernels.USE_NUMBA,
                    reason="compiled kernels disabled")
def test_kernel_routes_match_on_fixtures():
    for fam, _expected in FIXTURES.values():
        arcs = dense.detour_arcs(fam, 3)
        if arcs:
            dist = dense.bfs_distances(union_adjacency(fam), 8)
            nv = 1 + max(max(a.src, a.ctr, a.dst) for a in arcs)
            assert dense._ring_spans_kernel(arcs, dist, nv, 8, 8) == \
                dense._ring_spans_py(arcs, dist, nv, 8, 8)
        tarcs = dense.detour_arcs(fam, 1)
        assert dense._theta_spans_kernel(fam, 8, tarcs) == \
            dense._theta_spans_py(fam, 8, tarcs)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_structured_matches_brute_property(data):
    pool = pg_pool(2)
    idxs = data.draw(st.lists(st.integers(0, len(pool) - 1), min_size=2,
                              max_size=18, unique=True))
    fam = [pool[i] for i in idxs]
    assert minimal_dense_sets(fam, method="structured") == \
        brute_minimal_dense(fam)
