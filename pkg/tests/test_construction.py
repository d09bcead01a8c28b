"""Field tables, incidence graphs, path sampling, pruning, and the lifted
block graph."""

import math
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest

from bes.claims import claim_set, pairs_leq_t
from bes.construction import (
    DenseWitness,
    Incidence,
    MUTATION_KINDS,
    PathFamily,
    TwoPath,
    all_two_paths,
    build_blocks,
    claim_level_pairs,
    default_probability,
    field_tables,
    find_minimal_dense_sets,
    pg2_incidence,
    plant_mutation,
    prune,
    ratio,
    run_pipeline,
    sample_paths,
    verify_construction,
)
from bes.hypergraph import Hypergraph


# ---------------------------------------------------------------------------
# finite fields


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9, 13])
def test_field_axioms(q):
    ft = field_tables(q)
    elems = list(range(q))
    # additive structure: rows are permutations, 0 is neutral
    for a in elems:
        assert sorted(int(ft.add_table[a, b]) for b in elems) == elems
        assert ft.add(a, 0) == a
    # multiplicative structure from the log tables
    assert sorted(int(v) for v in ft.exp) == elems[1:]
    for a in elems[1:]:
        inv = int(ft.exp[(q - 1 - int(ft.log[a])) % (q - 1)])
        assert ft.mul(a, inv) == 1
        assert ft.mul(a, 1) == a
        assert ft.mul(a, 0) == 0
    rng = np.random.default_rng(5)
    for _ in range(200):
        a, b, c = (int(v) for v in rng.integers(0, q, 3))
        assert ft.mul(a, b) == ft.mul(b, a)
        assert ft.add(a, b) == ft.add(b, a)
        assert ft.mul(a, ft.mul(b, c)) == ft.mul(ft.mul(a, b), c)
        assert ft.add(a, ft.add(b, c)) == ft.add(ft.add(a, b), c)
        assert ft.mul(a, ft.add(b, c)) == ft.add(ft.mul(a, b), ft.mul(a, c))


def test_field_rejects_non_prime_power():
    with pytest.raises(ValueError):
        field_tables(6)
    with pytest.raises(ValueError):
        field_tables(12)


# ---------------------------------------------------------------------------
# incidence graphs


def test_heawood():
    inc = pg2_incidence(2)
    assert inc.m == 7
    assert inc.degree == 3
    assert all(len(nb) == 3 for nb in inc.adj)
    assert inc.edge_count() == 21


def test_q3_regularity():
    inc = pg2_incidence(3)
    assert inc.m == 13
    assert all(len(nb) == 4 for nb in inc.adj)


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_plane_axioms(q):
    """Two points share exactly one line and dually; hence girth 6."""
    inc = pg2_incidence(q)
    m = inc.m
    for a, b in combinations(range(m), 2):
        assert len(set(inc.adj[a]) & set(inc.adj[b])) == 1
    for a, b in combinations(range(m, 2 * m), 2):
        assert len(set(inc.adj[a]) & set(inc.adj[b])) == 1


@pytest.mark.parametrize("q", [2, 3, 4])
def test_two_path_count(q):
    inc = pg2_incidence(q)
    expect = 2 * inc.m * math.comb(q + 1, 2)
    assert len(all_two_paths(inc)) == expect


# ---------------------------------------------------------------------------
# sampling


def test_sampling_edge_cases():
    inc = pg2_incidence(3)
    assert len(sample_paths(inc, p=0.0, seed=1)) == 0
    full = sample_paths(inc, p=1.0, seed=1)
    assert len(full) == len(all_two_paths(inc))
    a = sample_paths(inc, seed=7)
    b = sample_paths(inc, seed=7)
    assert a.paths == b.paths
    with pytest.raises(ValueError):
        sample_paths(inc, p=1.5)


def test_sampling_concentration():
    inc = pg2_incidence(7)
    p = default_probability(inc.m)
    total = 2 * inc.m * math.comb(8, 2)
    mean = p * total
    sd = math.sqrt(total * p * (1 - p))
    count = len(sample_paths(inc, seed=0))
    assert abs(count - mean) < 5 * sd


# ---------------------------------------------------------------------------
# dense sets


def fake_family(paths, m):
    """Family over a synthetic base with centers in [0, m), ends in [m, 2m)."""
    inc = Incidence(q=3, m=m, adj=tuple(() for _ in range(2 * m)))
    return PathFamily(base=inc, paths=tuple(paths), p=1.0)


def test_dense_duplicate_triples():
    # paths 0 and 2 share a vertex set (ends stored unsorted on purpose)
    fam = fake_family([TwoPath(0, (4, 5)), TwoPath(1, (4, 5)),
                       TwoPath(0, (5, 4))], m=4)
    wits = find_minimal_dense_sets(fam)
    assert DenseWitness((0, 2), 3) in wits


def test_dense_claw():
    fam = fake_family([TwoPath(0, (4, 5)), TwoPath(0, (4, 6)),
                       TwoPath(0, (5, 6)), TwoPath(1, (7, 8))], m=5)
    wits = find_minimal_dense_sets(fam)
    assert wits == [DenseWitness((0, 1, 2), 4)]


def test_prune_recovers_planted_claw():
    fam = fake_family([TwoPath(0, (4, 5)), TwoPath(0, (4, 6)),
                       TwoPath(0, (5, 6)), TwoPath(1, (7, 8))], m=5)
    res = prune(fam)
    assert res.removed == (2,)
    assert len(res.family) == 3
    assert not find_minimal_dense_sets(res.family)


def _brute_minimal_dense(fam, i_max):
    paths = fam.paths
    dense = []
    for size in range(2, min(i_max, len(paths)) + 1):
        for sub in combinations(range(len(paths)), size):
            acc = set()
            for i in sub:
                acc.update(paths[i].vertices)
            if len(acc) <= size + 1:
                dense.append((sub, len(acc)))
    minimal = []
    dense_keys = {frozenset(s) for s, _ in dense}
    for sub, span in dense:
        if any(k < frozenset(sub) for k in dense_keys):
            continue
        minimal.append(DenseWitness(sub, span))
    return sorted(minimal)


def random_fake_family(rng, npaths, m):
    paths = []
    seen = set()
    while len(paths) < npaths:
        c = int(rng.integers(0, m))
        u, v = sorted(int(x) for x in rng.choice(m, size=2, replace=False))
        pt = TwoPath(c, (m + u, m + v))
        if pt not in seen:
            seen.add(pt)
            paths.append(pt)
    return fake_family(paths, m)


@pytest.mark.parametrize("trial", range(10))
def test_dense_finder_matches_brute_force(trial):
    rng = np.random.default_rng(900 + trial)
    fam = random_fake_family(rng, npaths=12, m=4 + trial % 3)
    assert sorted(find_minimal_dense_sets(fam)) == \
        _brute_minimal_dense(fam, 8)


def test_dense_finder_matches_brute_force_wide():
    # wide girth-6 family: sizes <= 3 stay cheap to enumerate directly
    inc = pg2_incidence(3)
    rng = np.random.default_rng(1234)
    pool = all_two_paths(inc)
    pick = rng.choice(len(pool), size=70, replace=False)
    fam = PathFamily(base=inc, paths=tuple(pool[i] for i in sorted(pick)),
                     p=1.0)
    got = {w for w in find_minimal_dense_sets(fam) if len(w.indices) <= 3}
    assert got == set(_brute_minimal_dense(fam, 3))
    assert any(len(w.indices) == 3 for w in got)


# ---------------------------------------------------------------------------
# block lifting and verification


def test_build_blocks_single_path():
    fam = fake_family([TwoPath(0, (2, 3))], m=2)
    g = build_blocks(fam)
    assert g.n == 6
    assert g.edges == ((0, 4, 5), (2, 3, 4), (2, 3, 5))


def test_disjoint_paths_verify():
    fam = fake_family([TwoPath(0, (6, 7)), TwoPath(1, (8, 9)),
                       TwoPath(2, (10, 11))], m=6)
    g = build_blocks(fam)
    assert g.m == 9
    rep = verify_construction(g, fam)
    assert rep.ok, rep.checks
    assert rep.covered_pairs == 24
    assert rep.three_only == 6
    assert rep.tight_counts[2] == 3
    assert rep.tight_counts[3] == 3


def test_claim_levels_match_brute_force():
    # paths sharing single base vertices exercise cross-block interaction
    fam = fake_family([TwoPath(0, (5, 6)), TwoPath(1, (6, 7)),
                       TwoPath(2, (5, 7)), TwoPath(0, (6, 8))], m=5)
    g = build_blocks(fam)
    fresh, _tight, violations = claim_level_pairs(g, t_max=4, kmax=4)
    assert not violations
    levels = {}
    for pair in combinations(range(g.n), 2):
        cs = claim_set(g, pair, i_max=4)
        low = [i for i in sorted(cs) if 1 <= i <= 4]
        if low:
            levels[pair] = low[0]
    for t in range(1, 5):
        assert fresh[t] == {p for p, lv in levels.items() if lv == t}, t


def test_ratio_single_edges():
    g4 = Hypergraph.from_edges(4, [(0, 1, 2, 3)])
    assert ratio(g4, 8) == Fraction(1, 12)
    g3 = Hypergraph.from_edges(3, [(0, 1, 2)])
    assert ratio(g3, 8) == Fraction(1, 6)
    with pytest.raises(ValueError):
        ratio(Hypergraph(3, 3, ()), 8)


# ---------------------------------------------------------------------------
# pipelines


@pytest.fixture(scope="module")
def q7_result():
    return run_pipeline(7, seed=42)


def test_small_pipeline_q3():
    res = run_pipeline(3, seed=11)
    assert not find_minimal_dense_sets(res.family)
    assert res.report.ok, res.report.checks
    assert res.graph.m == 3 * len(res.family)
    assert Fraction(0) < res.density <= Fraction(3, 16)


def test_pipeline_q7(q7_result):
    res = q7_result
    assert res.report.ok, res.report.checks
    assert res.sampled == len(res.family) + len(res.pruned.removed)
    assert Fraction(0) < res.density <= Fraction(3, 16)
    assert res.report.covered_pairs == 8 * len(res.family)
    assert res.report.two_only == 0
    assert res.report.four_claimed == 0


def test_pipeline_deterministic(q7_result):
    res2 = run_pipeline(7, seed=42, deep=False)
    assert res2.graph.edges == q7_result.graph.edges
    assert res2.density == q7_result.density


@pytest.mark.parametrize("kind", MUTATION_KINDS)
def test_mutations_detected(kind, q7_result):
    fam = q7_result.family
    for s in range(3):
        rng = np.random.default_rng(100 + s)
        g, desc = plant_mutation(fam, kind, rng)
        rep = verify_construction(g, fam, deep=False)
        assert not rep.ok, (kind, desc)
