"""Enumeration and indexing of the auxiliary-operator hierarchy.

Multi-indices n = (n_1, ..., n_K) with sum(n) <= N are laid out in graded
lexicographic order (by depth, then lexicographically within a depth) and
addressed by a flat rank. Neighbor tables (rank of n with n_k incremented
or decremented) are precomputed once so the right-hand side never performs
hash lookups.
"""

from dataclasses import dataclass
from math import comb

import numpy as np

# Refuse to enumerate hierarchies that would not fit in memory anyway.
MAX_NODES = 5_000_000

# Sentinel rank for a missing neighbor (above truncation or n_k = 0).
NO_NEIGHBOR = -1


def hierarchy_count(n_sites, depth_max):
    """Number of multi-indices with sum <= depth_max (stars and bars)."""
    return comb(depth_max + n_sites, n_sites)


def _compositions(total, parts):
    """All tuples of `parts` nonnegative integers summing to `total`, lex order."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def enumerate_multi_indices(n_sites, depth_max):
    """Multi-indices in graded lexicographic order as an (count, n_sites) array."""
    out = []
    for depth in range(depth_max + 1):
        block = sorted(_compositions(depth, n_sites))
        out.extend(block)
    return np.array(out, dtype=np.int64).reshape(-1, n_sites)


@dataclass(frozen=True)
class HierarchyIndexSpace:
    """Flat index space over the hierarchy with precomputed adjacency.

    neighbors_plus[i, k] is the rank of indices[i] with n_k incremented,
    or NO_NEIGHBOR when that would exceed the truncation depth;
    neighbors_minus[i, k] likewise for decrementing.
    """

    n_sites: int
    depth_max: int
    indices: np.ndarray          # (count, n_sites)
    neighbors_plus: np.ndarray   # (count, n_sites)
    neighbors_minus: np.ndarray  # (count, n_sites)

    @property
    def count(self):
        return self.indices.shape[0]

    @property
    def depths(self):
        return self.indices.sum(axis=1)

    def rank(self, n):
        """Flat rank of a multi-index tuple."""
        key = tuple(int(v) for v in n)
        try:
            return self._rank_map[key]
        except KeyError:
            raise KeyError(f"multi-index {key} not in hierarchy") from None

    def unrank(self, i):
        return tuple(int(v) for v in self.indices[i])

    @property
    def _rank_map(self):
        # Built lazily; cached on the instance despite frozen dataclass.
        m = getattr(self, "_rank_map_cache", None)
        if m is None:
            m = {tuple(int(v) for v in row): i for i, row in enumerate(self.indices)}
            object.__setattr__(self, "_rank_map_cache", m)
        return m


def enumerate_hierarchy(n_sites, depth_max):
    """Build the full HierarchyIndexSpace for sum(n) <= depth_max."""
    if depth_max < 0:
        raise ValueError("truncation depth must be nonnegative")
    count = hierarchy_count(n_sites, depth_max)
    if count > MAX_NODES:
        raise ValueError(
            f"hierarchy with {count} nodes exceeds the {MAX_NODES} node limit"
        )
    indices = enumerate_multi_indices(n_sites, depth_max)
    rank_map = {tuple(int(v) for v in row): i for i, row in enumerate(indices)}

    plus = np.full((count, n_sites), NO_NEIGHBOR, dtype=np.int64)
    minus = np.full((count, n_sites), NO_NEIGHBOR, dtype=np.int64)
    for i, row in enumerate(indices):
        n = tuple(int(v) for v in row)
        depth = sum(n)
        for k in range(n_sites):
            if depth < depth_max:
                plus[i, k] = rank_map[n[:k] + (n[k] + 1,) + n[k + 1:]]
            if n[k] > 0:
                minus[i, k] = rank_map[n[:k] + (n[k] - 1,) + n[k + 1:]]

    space = HierarchyIndexSpace(
        n_sites=n_sites,
        depth_max=depth_max,
        indices=indices,
        neighbors_plus=plus,
        neighbors_minus=minus,
    )
    object.__setattr__(space, "_rank_map_cache", rank_map)
    return space
