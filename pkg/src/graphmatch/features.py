"""Keypoint feature sets and their graph representation.

An image is summarized by keypoint coordinates plus one descriptor vector per
keypoint. The graph view is a complete self-loop-free graph whose adjacency
matrix holds pairwise Euclidean pixel distances and whose feature matrix
stacks the descriptors row-wise.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InputError


@dataclass(frozen=True)
class KeyPoint:
    x: float
    y: float

    def __post_init__(self):
        if not (np.isfinite(self.x) and np.isfinite(self.y)):
            raise InputError(f"keypoint coordinates must be finite, got ({self.x}, {self.y})")


@dataclass(frozen=True)
class FeatureSet:
    """Keypoints and descriptors for one image. Immutable after construction."""

    image_id: str
    keypoints: tuple[KeyPoint, ...]
    descriptors: np.ndarray  # (n, p), float64
    image_width: int | None = None
    image_height: int | None = None

    def __post_init__(self):
        desc = np.asarray(self.descriptors, dtype=np.float64)
        if desc.ndim != 2:
            raise InputError(f"descriptors must be a 2-D matrix, got ndim={desc.ndim}")
        n, p = desc.shape
        if len(self.keypoints) != n:
            raise InputError(
                f"descriptor row count {n} does not match keypoint count {len(self.keypoints)}"
            )
        if n < 1:
            raise InputError("feature set must contain at least one keypoint")
        if p < 1:
            raise InputError("descriptor dimension must be at least 1")
        if not np.all(np.isfinite(desc)):
            raise InputError("descriptors contain non-finite values")
        desc.setflags(write=False)
        object.__setattr__(self, "descriptors", desc)
        object.__setattr__(self, "keypoints", tuple(self.keypoints))

    @property
    def n(self) -> int:
        return len(self.keypoints)

    @property
    def descriptor_dim(self) -> int:
        return self.descriptors.shape[1]

    def coords(self) -> np.ndarray:
        """Keypoint coordinates as an (n, 2) array."""
        return np.array([(kp.x, kp.y) for kp in self.keypoints], dtype=np.float64)

    def normalized(self) -> "FeatureSet":
        """Copy with every descriptor row scaled to unit L2 norm (zero rows kept as-is)."""
        desc = np.array(self.descriptors)
        norms = np.linalg.norm(desc, axis=1, keepdims=True)
        np.divide(desc, norms, out=desc, where=norms > 0)
        return FeatureSet(
            image_id=self.image_id,
            keypoints=self.keypoints,
            descriptors=desc,
            image_width=self.image_width,
            image_height=self.image_height,
        )

    def subset(self, indices) -> "FeatureSet":
        """Restrict to the given keypoint indices, preserving their order."""
        indices = list(indices)
        return FeatureSet(
            image_id=self.image_id,
            keypoints=tuple(self.keypoints[i] for i in indices),
            descriptors=self.descriptors[indices],
            image_width=self.image_width,
            image_height=self.image_height,
        )


@dataclass(frozen=True)
class GraphRep:
    """Complete graph for one image: pairwise-distance adjacency + feature matrix."""

    adjacency: np.ndarray  # (n, n), symmetric, zero diagonal
    features: np.ndarray   # (n, p)

    def __post_init__(self):
        adj = np.asarray(self.adjacency, dtype=np.float64)
        feat = np.asarray(self.features, dtype=np.float64)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise InputError("adjacency must be square")
        if feat.shape[0] != adj.shape[0]:
            raise InputError("feature row count must match adjacency size")
        adj.setflags(write=False)
        feat.setflags(write=False)
        object.__setattr__(self, "adjacency", adj)
        object.__setattr__(self, "features", feat)

    @property
    def n(self) -> int:
        return self.adjacency.shape[0]


def build_graph(features: FeatureSet, normalize_adjacency: bool = False) -> GraphRep:
    """Turn a feature set into its graph representation.

    The adjacency entry (i, j) is the Euclidean distance between keypoints i
    and j; node order follows the input. With normalize_adjacency the matrix
    is divided by its maximum entry for scale-free experiments.
    """
    if features.n < 2:
        raise InputError(f"graph construction needs at least 2 keypoints, got {features.n}")
    pts = features.coords()
    diff = pts[:, None, :] - pts[None, :, :]
    adjacency = np.sqrt(np.sum(diff * diff, axis=2))
    np.fill_diagonal(adjacency, 0.0)
    adjacency = (adjacency + adjacency.T) / 2.0  # exact symmetry despite round-off
    if normalize_adjacency:
        peak = adjacency.max()
        if peak > 0:
            adjacency = adjacency / peak
    return GraphRep(adjacency=adjacency, features=features.descriptors)


def affinity(fa: GraphRep, fb: GraphRep) -> np.ndarray:
    """Cross-graph node similarity: inner products of descriptor rows, shape (n1, n2)."""
    if fa.features.shape[1] != fb.features.shape[1]:
        raise InputError(
            f"descriptor dimension mismatch: {fa.features.shape[1]} vs {fb.features.shape[1]}"
        )
    return fa.features @ fb.features.T


def feature_select(fa: FeatureSet, fb: FeatureSet, top: int) -> tuple[FeatureSet, FeatureSet]:
    """Keep each side's top scoring features, original relative order preserved.

    A feature's score is its maximum descriptor inner product against all
    features of the other image. Applied symmetrically to both sets.
    """
    limit = min(fa.n, fb.n)
    if not 1 <= top <= limit:
        raise InputError(f"top-T count {top} out of range [1, {limit}]")
    sims = fa.descriptors @ fb.descriptors.T
    idx_a = _top_indices(sims.max(axis=1), top)
    idx_b = _top_indices(sims.max(axis=0), top)
    return fa.subset(idx_a), fb.subset(idx_b)


def _top_indices(scores: np.ndarray, top: int) -> np.ndarray:
    # stable sort keeps the lower index on tied scores
    order = np.argsort(-scores, kind="stable")[:top]
    return np.sort(order)
