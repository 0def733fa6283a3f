import numpy as np
import pytest

from graphmatch.features import FeatureSet, KeyPoint


def make_feature_set(rng, n, scale=512.0, p=16, image_id="img", unit=True):
    """Random keypoints in [0, scale]^2 with random descriptors (unit rows by default)."""
    pts = rng.uniform(0, scale, size=(n, 2))
    desc = rng.normal(size=(n, p))
    if unit:
        desc /= np.linalg.norm(desc, axis=1, keepdims=True)
    return feature_set_from_arrays(pts, desc, image_id)


def feature_set_from_arrays(pts, desc, image_id="img"):
    return FeatureSet(
        image_id=image_id,
        keypoints=tuple(KeyPoint(float(x), float(y)) for x, y in pts),
        descriptors=np.asarray(desc, dtype=np.float64),
    )


def permuted_copy(fs, perm, image_id="copy"):
    pts = fs.coords()[perm]
    desc = fs.descriptors[perm]
    return feature_set_from_arrays(pts, desc, image_id)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
