"""Exact toolkit for degenerate Turán densities of sparse configurations.

Builds and certifies the 3-uniform lower-bound construction, implements
the cluster-merging and pair-weight machinery of the upper-bound argument
for r >= 4, and provides exact small-n extremal search.
"""

from .hypergraph import Hypergraph, normalize_edges, read_hg, write_hg
from .claims import ClaimSet, claim_budget, claim_set, claimed_pairs
from .freeness import ForbiddenFamily, is_free

__all__ = [
    "Hypergraph",
    "normalize_edges",
    "read_hg",
    "write_hg",
    "ClaimSet",
    "claim_budget",
    "claim_set",
    "claimed_pairs",
    "ForbiddenFamily",
    "is_free",
]

__version__ = "0.1.0"
