"""Exact pair-weight accounting over merged clusters.

Once a graph's edges are partitioned into clusters (two-share components
closed under claimed-pair merging), each vertex pair holds one unit of
weight to distribute among the clusters that claim it.  If no pair hands
out more than its unit while every cluster collects at least C(r, 2) per
edge, the edge count is at most C(n, 2) / C(r, 2).  This module supplies
the two assignment rules (a coarse one sound at uniformity 5 and up, a
finer one for uniformity 4), generators for the exceptional cluster
shapes on which the cluster bound is tight, a classifier recognising
those shapes, and the covered-pair counting identities they satisfy.

All arithmetic is exact.  Weights are fractions.Fraction end to end and
no float enters any bound.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import AbstractSet, Iterable, Sequence

from . import claims, freeness, merging
from .hypergraph import Hypergraph, Pair

# The finest rule inspects claim levels up to 6; nothing higher matters.
CLAIM_CAP = 6


# ---------------------------------------------------------------------------
# Known quadratic-density limits at uniformity 4 and the colouring threshold


def _limit_r4(k: int) -> Fraction:
    # even levels follow 1/(r^2 - r), odd levels 1/(r^2 - r - 1), at r = 4
    return Fraction(1, 12) if k % 2 == 0 else Fraction(1, 11)


QUADRATIC_LIMITS_R4: dict[int, Fraction] = {k: _limit_r4(k) for k in range(2, 9)}


def limit_formula(k: int) -> str:
    """Closed form behind the table entry for level k, as display text."""
    if k not in QUADRATIC_LIMITS_R4:
        raise ValueError(f"no table entry for level {k}")
    if k % 2 == 0:
        return "1/(r^2 - r) at r = 4"
    return "1/(r^2 - r - 1) at r = 4"


def gr_quadratic(p: int) -> tuple[int, Fraction]:
    """Quadratic-growth threshold for pair colourings of a p-clique.

    Returns (q_quad, limit): q_quad = C(p, 2) - p/2 + 2 is the least
    colour demand per p-clique that forces quadratically many colours,
    and the colour count grows like limit * n^2 with
    limit = 1/2 - table entry at level p/2 - 1.
    """
    if p % 2 != 0 or p < 6:
        raise ValueError(f"p must be an even integer >= 6, got {p}")
    k = p // 2 - 1
    if k not in QUADRATIC_LIMITS_R4:
        raise ValueError(
            f"level {k} is outside the table; supported p range is [6, 18]")
    q_quad = math.comb(p, 2) - p // 2 + 2
    return q_quad, Fraction(1, 2) - QUADRATIC_LIMITS_R4[k]


# ---------------------------------------------------------------------------
# Weight schemes and per-pair weights

SCHEME_TAGS = ("r5", "r4")


@dataclass(frozen=True)
class WeightScheme:
    """Which fractional assignment rule applies.

    "r5" pays a full unit on covered pairs and a third on 2-claimed ones;
    it is sound for uniformity 5 and up.  "r4" keeps those two rules and
    adds three refinements driven by claim levels up to 6; it is specific
    to uniformity 4.
    """

    tag: str
    r: int

    def __post_init__(self) -> None:
        if self.tag not in SCHEME_TAGS:
            raise ValueError(f"unknown scheme tag {self.tag!r}")
        if self.tag == "r5" and self.r < 5:
            raise ValueError("the r5 rule needs uniformity at least 5")
        if self.tag == "r4" and self.r != 4:
            raise ValueError("the r4 rule is specific to uniformity 4")


def scheme_for(r: int) -> WeightScheme:
    """The applicable scheme at a given uniformity."""
    if r < 4:
        raise ValueError("weight schemes start at uniformity 4")
    return WeightScheme("r4", 4) if r == 4 else WeightScheme("r5", r)


def _norm(pair: Pair) -> Pair:
    a, b = pair
    if a == b:
        raise ValueError(f"degenerate pair {pair}")
    return (a, b) if a < b else (b, a)


def _r5_weight(c: AbstractSet[int]) -> Fraction:
    if 1 in c:
        return Fraction(1)
    if 2 in c:
        return Fraction(1, 3)
    return Fraction(0)


def _r4_weight(c: AbstractSet[int], uncovered: bool) -> Fraction:
    w = Fraction(1) if 1 in c else Fraction(1, 3) if 2 in c else Fraction(0)
    if 2 in c and 4 in c:
        w = max(w, Fraction(1, 2))
    if uncovered and {3, 4, 5} <= c:
        w = max(w, Fraction(1, 2))
    if uncovered and {3, 5, 6} <= c:
        w = Fraction(1)
    return w


def pair_weight(
    cluster: Hypergraph,
    pair: Pair,
    scheme: WeightScheme,
    covered: AbstractSet[Pair] | None = None,
) -> Fraction:
    """Weight one cluster assigns to one vertex pair.

    covered must be the 2-shadow of the whole graph the cluster sits in;
    the r4 refinements that pay 1/2 and 1 only fire on pairs no edge of
    the graph covers, so the r4 scheme requires it.  The r5 rule ignores
    it.  Always an exact Fraction in [0, 1].
    """
    if cluster.r != scheme.r:
        raise ValueError(
            f"scheme expects uniformity {scheme.r}, cluster has {cluster.r}")
    p = _norm(pair)
    if scheme.tag == "r5":
        return _r5_weight(claims.claim_set(cluster, p, i_max=2))
    if covered is None:
        raise ValueError(
            "the r4 scheme needs the covered-pair set of the ambient graph")
    c = claims.claim_set(cluster, p, i_max=CLAIM_CAP)
    return _r4_weight(c, p not in covered)


# ---------------------------------------------------------------------------
# Pair census and the covered-pair counting identities


def _pairs_with_slack(members: Sequence[int], slack: int, n: int) -> Iterable[Pair]:
    """Pairs whose addition keeps a union within budget: with slack s, up
    to s endpoints may fall outside the union."""
    if slack <= 0:
        yield from combinations(sorted(members), 2)
        return
    if slack == 1:
        inside = set(members)
        for a in members:
            for b in range(n):
                if b != a and (b not in inside or b > a):
                    yield (a, b) if a < b else (b, a)
        return
    yield from combinations(range(n), 2)


def pair_census(g: Hypergraph) -> tuple[frozenset[Pair], frozenset[Pair]]:
    """(covered pairs, pairs 2-claimed but not covered).

    A 2-claim witness is two edges whose union stays within 2r - 2 after
    the pair joins, so scanning edge pairs and reading off the slack is
    exact.
    """
    covered = g.shadow()
    budget = claims.claim_budget(g.r, 2)
    esets = g.edge_sets()
    two: set[Pair] = set()
    for i in range(g.m):
        for j in range(i + 1, g.m):
            union = esets[i] | esets[j]
            slack = budget - len(union)
            if slack < 0:
                continue
            two.update(_pairs_with_slack(sorted(union), slack, g.n))
    return covered, frozenset(two - covered)


def check_pair_count_identity(cluster: Hypergraph, composition: Sequence[int]) -> bool:
    """Covered-pair identity plus the 2-but-not-1-claimed floor.

    A cluster merged from tree components of the given sizes covers
    exactly sum(e_i * C(r, 2) - e_i + 1) pairs and 2-claims at least
    1 - m + sum((e_i - 1) * (r - 2)^2) pairs it does not cover.
    """
    comp = list(composition)
    if any(e < 1 for e in comp):
        raise ValueError("component sizes must be positive")
    if sum(comp) != cluster.m:
        raise ValueError("composition does not sum to the edge count")
    covered, two_only = pair_census(cluster)
    r = cluster.r
    want = sum(e * math.comb(r, 2) - e + 1 for e in comp)
    floor = 1 - len(comp) + sum((e - 1) * (r - 2) ** 2 for e in comp)
    return len(covered) == want and len(two_only) >= floor


# ---------------------------------------------------------------------------
# Exceptional cluster shapes: tags and generators

_FIXED_KINDS = {
    "capped-five-tree": (5, 2, 2),
    "forked-four-tree": (4, 2, 2, 1),
    "studded-three-tree": (3, 2, 2, 2),
    "studded-three-tree-plus": (3, 2, 2, 2, 2),
    "bridged-three-tree": (3, 2, 2, 1, 1),
    "chained-diamonds": (2, 2, 2, 2, 1),
}


@dataclass(frozen=True)
class FamilyTag:
    """Name of an exceptional cluster shape.

    hubs counts the diamonds of a diamond-hub and is zero for the six
    fixed shapes.  Fixed-shape compositions, largest component first:
    capped-five-tree (5,2,2), forked-four-tree (4,2,2,1),
    studded-three-tree (3,2,2,2), studded-three-tree-plus (3,2,2,2,2),
    bridged-three-tree (3,2,2,1,1), chained-diamonds (2,2,2,2,1).  A
    diamond-hub with i diamonds has composition (2,...,2,1) and 2i + 1
    edges.
    """

    kind: str
    hubs: int = 0

    def __post_init__(self) -> None:
        if self.kind == "diamond-hub":
            if self.hubs < 4:
                raise ValueError("a diamond hub needs at least four diamonds")
        elif self.kind in _FIXED_KINDS:
            if self.hubs:
                raise ValueError(f"{self.kind} does not take a hub count")
        else:
            raise ValueError(f"unknown family kind {self.kind!r}")


CAPPED_FIVE_TREE = FamilyTag("capped-five-tree")
FORKED_FOUR_TREE = FamilyTag("forked-four-tree")
STUDDED_THREE_TREE = FamilyTag("studded-three-tree")
STUDDED_THREE_TREE_PLUS = FamilyTag("studded-three-tree-plus")
BRIDGED_THREE_TREE = FamilyTag("bridged-three-tree")
CHAINED_DIAMONDS = FamilyTag("chained-diamonds")


def diamond_hub(count: int) -> FamilyTag:
    return FamilyTag("diamond-hub", count)


def fixed_tags() -> tuple[FamilyTag, ...]:
    return (
        CAPPED_FIVE_TREE,
        FORKED_FOUR_TREE,
        STUDDED_THREE_TREE,
        STUDDED_THREE_TREE_PLUS,
        BRIDGED_THREE_TREE,
        CHAINED_DIAMONDS,
    )


class _Builder:
    """Accumulates edges over a growing fresh-vertex supply."""

    def __init__(self) -> None:
        self.edges: list[list[int]] = []
        self.n = 0

    def fresh(self, k: int) -> list[int]:
        out = list(range(self.n, self.n + k))
        self.n += k
        return out

    def add(self, *verts: int, pad: int = 0) -> list[int]:
        e = list(verts) + self.fresh(pad)
        self.edges.append(e)
        return e


def _apex(b: _Builder, r: int, x: int, y: int) -> tuple[list[int], list[int]]:
    """Two edges sharing a fresh pair, one through x and one through y:
    a diamond that 2-claims xy without covering it."""
    w = b.fresh(2)
    ea = b.add(w[0], w[1], x, pad=r - 3)
    eb = b.add(w[0], w[1], y, pad=r - 3)
    return ea, eb


def _path_tree(b: _Builder, r: int, m: int) -> list[list[int]]:
    """m edges glued in a row; each glue pair is private to the previous
    edge, so the two end edges keep r - 2 private vertices."""
    out = [b.add(pad=r)]
    for _ in range(m - 1):
        prev = out[-1]
        out.append(b.add(prev[-2], prev[-1], pad=r - 2))
    return out


def _stud(b: _Builder, rng: random.Random, r: int,
          targets: Sequence[tuple[list[int], int | None]]) -> None:
    """Apex one diamond per target edge; a non-None index forces that
    endpoint so an end edge loses a private vertex.  Four diamonds on one
    pair would crowd, so repeats are capped at three."""
    seen: dict[Pair, int] = {}
    for host, forced in targets:
        while True:
            x = host[forced] if forced is not None else rng.choice(host)
            y = rng.choice([v for v in host if v != x])
            p = _norm((x, y))
            if seen.get(p, 0) < 3:
                break
        seen[p] = seen.get(p, 0) + 1
        _apex(b, r, x, y)


def _build_capped_five_tree(b: _Builder, rng: random.Random, r: int) -> None:
    tree = _path_tree(b, r, 5)
    # both flexible ends must lose a private vertex to their diamond
    first_priv = rng.randrange(r - 2)
    last_priv = 2 + rng.randrange(r - 2)
    _stud(b, rng, r, [(tree[0], first_priv), (tree[4], last_priv)])


def _build_forked_four_tree(b: _Builder, rng: random.Random, r: int) -> None:
    core = b.add(pad=r)
    x2, y2, x3, y3 = rng.sample(core, 4)
    _apex(b, r, x2, y2)
    # a four-tree whose first two edges straddle x3 y3: it 2-claims the
    # pair without covering it
    g1, g2 = b.fresh(2)
    f1 = b.add(x3, g1, g2, pad=r - 3)
    f2 = b.add(g1, g2, y3, pad=r - 3)
    f3 = b.add(f2[-2], f2[-1], pad=r - 2)
    f4 = b.add(f3[-2], f3[-1], pad=r - 2)
    del f1
    _stud(b, rng, r, [(f4, 2 + rng.randrange(r - 2))])


def _build_studded_three_tree(b: _Builder, rng: random.Random, r: int,
                              extra: int = 0) -> None:
    tree = _path_tree(b, r, 3)
    targets: list[tuple[list[int], int | None]] = [
        (tree[0], rng.randrange(r - 2)),
        (tree[2], 2 + rng.randrange(r - 2)),
        (rng.choice(tree), None),
    ]
    for _ in range(extra):
        targets.append((rng.choice(tree), None))
    _stud(b, rng, r, targets)


def _build_bridged_three_tree(b: _Builder, rng: random.Random, r: int) -> None:
    core = b.add(pad=r)
    x2, y2, x3, y3 = rng.sample(core, 4)
    _apex(b, r, x2, y2)
    # three-tree straddling x3 y3, third edge hung off the first
    g1, g2 = b.fresh(2)
    f1 = b.add(x3, g1, g2, pad=r - 3)
    f2 = b.add(g1, g2, y3, pad=r - 3)
    f3 = b.add(f1[-2], f1[-1], pad=r - 2)
    del f2
    # the tree 2-claims u v across the f1 | f3 split; a fresh edge covers
    # it and bridges in as its own component
    u = rng.choice([v for v in f1 if v not in (f1[-2], f1[-1])])
    v = rng.choice(f3[2:])
    bridge = b.add(u, v, pad=r - 2)
    _stud(b, rng, r, [(bridge, 2 + rng.randrange(r - 2))])


def _build_chained_diamonds(b: _Builder, rng: random.Random, r: int) -> None:
    core = b.add(pad=r)
    x2, y2, x3, y3 = rng.sample(core, 4)
    d2a, d2b = _apex(b, r, x2, y2)
    _apex(b, r, x3, y3)
    # a diamond covering a pair the first diamond 2-claims but does not
    # cover: one endpoint private to each of its edges
    a = rng.choice(d2a[3:])
    c = rng.choice(d2b[3:])
    w1, w2 = b.fresh(2)
    b.add(a, c, w1, w2, pad=r - 4)
    far = b.add(w1, w2, pad=r - 2)
    _stud(b, rng, r, [(far, 2 + rng.randrange(r - 2))])


def _build_diamond_hub(b: _Builder, rng: random.Random, r: int, count: int) -> None:
    core = b.add(pad=r)
    pairs = list(combinations(core, 2))
    rng.shuffle(pairs)
    for t in range(count):
        x, y = pairs[t % len(pairs)]
        _apex(b, r, x, y)


def generate_family(tag: FamilyTag | str, r: int, seed: int | None = None) -> Hypergraph:
    """Build one member of an exceptional shape at the given uniformity.

    The result merges to a single cluster whose composition matches the
    shape, stays free of crowded subgraphs, and has no flexible edge.
    seed drives the free choices (which covered pairs the diamonds
    target) and a final relabelling.
    """
    if isinstance(tag, str):
        tag = FamilyTag(tag)
    if r < 4:
        raise ValueError("exceptional shapes need uniformity at least 4")
    rng = random.Random(seed)
    b = _Builder()
    if tag.kind == "diamond-hub":
        cap = 3 * math.comb(r, 2)
        if not 4 <= tag.hubs <= cap:
            raise ValueError(f"hub count must lie in [4, {cap}] at r = {r}")
        _build_diamond_hub(b, rng, r, tag.hubs)
    elif tag.kind == "capped-five-tree":
        _build_capped_five_tree(b, rng, r)
    elif tag.kind == "forked-four-tree":
        _build_forked_four_tree(b, rng, r)
    elif tag.kind == "studded-three-tree":
        _build_studded_three_tree(b, rng, r)
    elif tag.kind == "studded-three-tree-plus":
        _build_studded_three_tree(b, rng, r, extra=1)
    elif tag.kind == "bridged-three-tree":
        _build_bridged_three_tree(b, rng, r)
    else:
        _build_chained_diamonds(b, rng, r)
    perm = list(range(b.n))
    rng.shuffle(perm)
    edges = [[perm[v] for v in e] for e in b.edges]
    rng.shuffle(edges)
    return Hypergraph.from_edges(r, edges)


# ---------------------------------------------------------------------------
# Classification


def _hub_assembly(g: Hypergraph, parts: Sequence[tuple[int, ...]]) -> bool:
    """Whether every diamond can join a core grown from the single edge by
    2-claiming a pair the core already covers."""
    single = next(p for p in parts if len(p) == 1)
    esets = g.edge_sets()

    def edge_pairs(eids: Iterable[int]) -> set[Pair]:
        out: set[Pair] = set()
        for i in eids:
            out.update(combinations(sorted(esets[i]), 2))
        return out

    covered = edge_pairs(single)
    pending = [p for p in parts if len(p) == 2]
    progress = True
    while pending and progress:
        progress = False
        for p in list(pending):
            verts = sorted(g.vertices_of(p))
            own = edge_pairs(p)
            claimable = set(combinations(verts, 2)) - own
            if claimable & covered:
                pending.remove(p)
                covered |= own
                progress = True
    return not pending


def _chain_probe(g: Hypergraph, parts: Sequence[tuple[int, ...]]) -> bool:
    """Whether some diamond covers a pair that another diamond 2-claims
    but does not cover: the joint that makes a chain, not a hub."""
    esets = g.edge_sets()
    diamonds = [p for p in parts if len(p) == 2]
    for p in diamonds:
        for q in diamonds:
            if p == q:
                continue
            verts = g.vertices_of(q)
            for i in p:
                for pair in combinations(sorted(esets[i]), 2):
                    if not set(pair) <= verts:
                        continue
                    if not any(set(pair) <= esets[j] for j in q):
                        return True
    return False


def classify_cluster(
    g: Hypergraph,
    merged: merging.MergeResult | None = None,
    diagnostics: list[str] | None = None,
) -> FamilyTag | None:
    """Recognise an exceptional shape from a merged single cluster.

    Keys on the non-increasing composition, then on structural probes:
    tree checks for every component, the flexible-edge count of a
    five-tree, and the hub-or-chain assembly test that separates the two
    shapes sharing composition (2,2,2,2,1).  Returns None when nothing
    matches, appending the reasons to diagnostics when a list is given.
    """

    def fail(msg: str) -> None:
        if diagnostics is not None:
            diagnostics.append(msg)
        return None

    if merged is None:
        merged = merging.merge_clusters(g)
    if len(merged.final.parts) != 1:
        raise ValueError(
            f"expected a single cluster, found {len(merged.final.parts)} parts")
    if g.m < 9:
        raise ValueError(
            f"a cluster with {g.m} edges is not exceptional; "
            "shapes start at 9 edges")
    comp = merged.composition_of(0)
    parts = [tuple(p) for p in merged.initial.parts]
    for p in parts:
        if not merging.is_tree(g, p):
            return fail(f"component {p} is not a tree")
    if comp == (5, 2, 2):
        five = next(p for p in parts if len(p) == 5)
        if len(merging.flexible_edges(g, five)) != 2:
            return fail("the five-tree does not have exactly two flexible edges")
        return CAPPED_FIVE_TREE
    for kind, shape in _FIXED_KINDS.items():
        if comp == shape and kind not in ("capped-five-tree", "chained-diamonds"):
            return FamilyTag(kind)
    if set(comp) == {1, 2} and comp.count(1) == 1:
        i = comp.count(2)
        if i > 3 * math.comb(g.r, 2):
            return fail(f"{i} diamonds exceed the hub cap at r = {g.r}")
        if _hub_assembly(g, parts):
            return diamond_hub(i)
        if i == 4 and _chain_probe(g, parts):
            return CHAINED_DIAMONDS
        return fail("diamonds neither assemble onto the single edge nor chain")
    return fail(f"composition {comp} matches no exceptional shape")


# ---------------------------------------------------------------------------
# Bound verification


class NotFreeError(ValueError):
    """Input contains a crowded subgraph; weights mean nothing on it."""

    def __init__(self, witness: tuple[int, ...], span: int):
        self.witness = witness
        self.span = span
        super().__init__(
            f"{len(witness)} edges {witness} span only {span} vertices")


@dataclass(frozen=True)
class WeightViolation:
    kind: str  # "pair" | "cluster" | "unmerged"
    where: tuple
    value: Fraction
    bound: Fraction
    note: str = ""


@dataclass
class WeightReport:
    """Totals and violations from one bound check.

    per_pair holds every pair with positive total weight; per_cluster
    maps final part index to its collected weight.  edge_bound is the
    corollary C(n, 2) / C(r, 2), populated only when nothing is violated.
    """

    scheme: WeightScheme
    per_pair: dict[Pair, Fraction] = field(default_factory=dict)
    per_cluster: dict[int, Fraction] = field(default_factory=dict)
    violations: list[WeightViolation] = field(default_factory=list)
    edge_count: int = 0
    vertex_count: int = 0
    edge_bound: Fraction | None = None

    @property
    def ok(self) -> bool:
        return not self.violations


def _candidate_pairs(g: Hypergraph) -> set[Pair]:
    """Pairs that can carry positive weight at uniformity 4: every rule
    needs a 2- or 3-claim, and those witnesses are 2- or 3-edge unions
    within budget."""
    esets = g.edge_sets()
    out: set[Pair] = set(g.shadow())
    b2 = claims.claim_budget(g.r, 2)
    b3 = claims.claim_budget(g.r, 3)
    for i in range(g.m):
        for j in range(i + 1, g.m):
            u2 = esets[i] | esets[j]
            if len(u2) <= b2:
                out.update(_pairs_with_slack(sorted(u2), b2 - len(u2), g.n))
            if len(u2) > b3:
                continue
            for k in range(j + 1, g.m):
                u3 = u2 | esets[k]
                if len(u3) <= b3:
                    out.update(
                        _pairs_with_slack(sorted(u3), b3 - len(u3), g.n))
    return out


def verify_bounds(
    g: Hypergraph,
    merged: merging.MergeResult | None = None,
    scheme: WeightScheme | None = None,
    assume_free: bool = False,
) -> WeightReport:
    """Check both weight inequalities over a merged partition.

    Refuses input containing a crowded subgraph, raising NotFreeError
    with the witness.  Past the exact search limit that refusal cannot
    be computed here; pass assume_free=True only with an outside
    certificate.  Also flags any covered pair that a second cluster still
    2-claims, since that means the partition is not fully merged.
    """
    if scheme is None:
        scheme = scheme_for(g.r)
    if scheme.r != g.r:
        raise ValueError(
            f"scheme expects uniformity {scheme.r}, graph has {g.r}")
    if not assume_free:
        if g.m > freeness.MAX_EXACT_EDGES:
            raise ValueError(
                f"cannot certify crowded-freeness past {freeness.MAX_EXACT_EDGES} "
                "edges at this uniformity; pass assume_free=True with an "
                "outside certificate")
        family = freeness.ForbiddenFamily.crowded(g.r, 8)
        witness = freeness.find_any_level(g, family.level_map())
        if witness is not None:
            raise NotFreeError(witness, g.span(witness))
    if merged is None:
        merged = merging.merge_clusters(g)
    covered_all = g.shadow()
    need_per_edge = math.comb(g.r, 2)
    report = WeightReport(scheme=scheme, edge_count=g.m, vertex_count=g.n)
    one_claim: dict[Pair, int] = {}
    two_claim: dict[Pair, list[int]] = {}
    for idx, part in enumerate(merged.final.parts):
        sub = g.subgraph(part)
        cov, two = pair_census(sub)
        for p in cov:
            one_claim[p] = idx
        for p in two:
            two_claim.setdefault(p, []).append(idx)
        if scheme.tag == "r5":
            weights: dict[Pair, Fraction] = {p: Fraction(1) for p in cov}
            weights.update({p: Fraction(1, 3) for p in two})
        else:
            weights = {}
            for p in _candidate_pairs(sub):
                c = claims.claim_set(sub, p, i_max=CLAIM_CAP)
                w = _r4_weight(c, p not in covered_all)
                if w:
                    weights[p] = w
        total = sum(weights.values(), Fraction(0))
        report.per_cluster[idx] = total
        for p, w in weights.items():
            report.per_pair[p] = report.per_pair.get(p, Fraction(0)) + w
        need = Fraction(need_per_edge * len(part))
        if total < need:
            report.violations.append(WeightViolation(
                "cluster", (idx,), total, need,
                f"part {idx} collects {total} short of {need}"))
    for p, owner in one_claim.items():
        for other in two_claim.get(p, ()):
            report.violations.append(WeightViolation(
                "unmerged", p, Fraction(0), Fraction(0),
                f"part {owner} covers {p} while part {other} still 2-claims it"))
    for p, total in sorted(report.per_pair.items()):
        if total > 1:
            report.violations.append(WeightViolation(
                "pair", p, total, Fraction(1),
                f"pair {p} hands out {total}"))
    if not report.violations:
        report.edge_bound = Fraction(
            math.comb(g.n, 2), math.comb(g.r, 2))
    return report
