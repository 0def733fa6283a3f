"""Local-feature point-matching baseline: brute-force k-NN over descriptors
turned into a one-to-one assignment by greedy distance order."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from .discretize import Assignment
from .errors import InputError
from .features import FeatureSet


@dataclass(frozen=True)
class CandidateSet:
    """Per query feature: its k nearest other-image features, ascending by distance."""

    neighbors: tuple[tuple[tuple[int, float], ...], ...]  # [query][rank] -> (index, distance)
    n1: int
    n2: int
    k: int


def knn_candidates(f1: FeatureSet, f2: FeatureSet, k: int = 2) -> CandidateSet:
    """Exact k nearest neighbors under Euclidean descriptor distance.

    Ties break toward the lower candidate index. Brute force: exact and
    deterministic at the point counts this tool works with.
    """
    if k < 1:
        raise InputError(f"k must be at least 1, got {k}")
    if f1.descriptor_dim != f2.descriptor_dim:
        raise InputError(
            f"descriptor dimension mismatch: {f1.descriptor_dim} vs {f2.descriptor_dim}"
        )
    dists = cdist(f1.descriptors, f2.descriptors)
    kk = min(k, f2.n)
    neighbors = []
    for i in range(f1.n):
        order = np.argsort(dists[i], kind="stable")[:kk]
        neighbors.append(tuple((int(j), float(dists[i, j])) for j in order))
    return CandidateSet(neighbors=tuple(neighbors), n1=f1.n, n2=f2.n, k=kk)


def baseline_assignment(cands: CandidateSet, ratio: float | None = None) -> Assignment:
    """Greedy one-to-one selection over candidate pairs in ascending distance.

    With a ratio, a query is kept only when its best distance is below ratio
    times its second best (tied perfect matches count as ambiguous; queries
    with a single candidate pass). Queries whose candidates are all taken are
    dropped.
    """
    if ratio is not None and not 0 < ratio <= 1:
        raise InputError(f"ratio must be in (0, 1], got {ratio}")
    edges = []
    for i, cand in enumerate(cands.neighbors):
        if not cand:
            continue
        if ratio is not None and len(cand) >= 2:
            d1, d2 = cand[0][1], cand[1][1]
            if not d1 < ratio * d2:
                continue
        for j, dist in cand:
            edges.append((dist, i, j))
    edges.sort()
    taken_rows: set[int] = set()
    taken_cols: set[int] = set()
    pairs = []
    for dist, i, j in edges:
        if i in taken_rows or j in taken_cols:
            continue
        taken_rows.add(i)
        taken_cols.add(j)
        pairs.append((i, j))
    return Assignment(pairs=tuple(sorted(pairs)), n1=cands.n1, n2=cands.n2)
