"""Hard assignments: Hungarian discretization and the exhaustive test oracle."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import InputError

BRUTE_FORCE_CAP = 8


@dataclass(frozen=True)
class Assignment:
    """One-to-one correspondence: pairs (i in graph 1, j in graph 2), injective both ways."""

    pairs: tuple[tuple[int, int], ...]
    n1: int
    n2: int

    def __post_init__(self):
        pairs = tuple((int(i), int(j)) for i, j in self.pairs)
        rows = [i for i, _ in pairs]
        cols = [j for _, j in pairs]
        if len(set(rows)) != len(rows) or len(set(cols)) != len(cols):
            raise InputError("assignment must be injective on both sides")
        if rows and (min(rows) < 0 or max(rows) >= self.n1):
            raise InputError("graph-1 index out of range")
        if cols and (min(cols) < 0 or max(cols) >= self.n2):
            raise InputError("graph-2 index out of range")
        object.__setattr__(self, "pairs", pairs)

    def matrix(self) -> np.ndarray:
        """Dense 0/1 match matrix of shape (n1, n2)."""
        m = np.zeros((self.n1, self.n2))
        for i, j in self.pairs:
            m[i, j] = 1.0
        return m

    def swapped(self) -> "Assignment":
        """The same correspondence with graph roles exchanged."""
        return Assignment(
            pairs=tuple(sorted((j, i) for i, j in self.pairs)), n1=self.n2, n2=self.n1
        )


def hungarian(scores: np.ndarray) -> Assignment:
    """Assignment maximizing the sum of selected score entries.

    Rectangular inputs get min(n1, n2) pairs. Exact via linear sum assignment.
    """
    scores = np.asarray(scores, dtype=np.float64)
    if scores.ndim != 2 or scores.size == 0:
        raise InputError("score matrix must be non-empty and 2-D")
    if not np.all(np.isfinite(scores)):
        raise InputError("score matrix contains non-finite entries")
    rows, cols = linear_sum_assignment(scores, maximize=True)
    pairs = tuple(sorted(zip(rows.tolist(), cols.tolist())))
    return Assignment(pairs=pairs, n1=scores.shape[0], n2=scores.shape[1])


def brute_force_match(
    a1: np.ndarray, a2: np.ndarray, affinity: np.ndarray, lam: float = 1.0
) -> tuple[Assignment, float]:
    """Enumerate every injective assignment and return the objective maximizer.

    Test oracle only; refuses instances above the enumeration cap. Ties break
    toward the lexicographically first assignment.
    """
    from .solver import objective  # local import avoids a module cycle

    n1, n2 = affinity.shape
    if min(n1, n2) > BRUTE_FORCE_CAP:
        raise InputError(f"instance size {min(n1, n2)} above enumeration cap {BRUTE_FORCE_CAP}")
    best_pairs = None
    best_value = -np.inf
    if n1 >= n2:
        for rows in itertools.permutations(range(n1), n2):
            pairs = tuple(sorted(zip(rows, range(n2))))
            m = np.zeros((n1, n2))
            m[list(rows), list(range(n2))] = 1.0
            value = objective(m, a1, a2, affinity, lam)
            if value > best_value:
                best_value = value
                best_pairs = pairs
    else:
        for cols in itertools.permutations(range(n2), n1):
            pairs = tuple(zip(range(n1), cols))
            m = np.zeros((n1, n2))
            m[list(range(n1)), list(cols)] = 1.0
            value = objective(m, a1, a2, affinity, lam)
            if value > best_value:
                best_value = value
                best_pairs = pairs
    return Assignment(pairs=best_pairs, n1=n1, n2=n2), float(best_value)
