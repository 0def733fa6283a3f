"""Feature-file ingestion and match-report serialization.

Feature files are JSON documents:

    {
      "format": 1,
      "image": "some-id",
      "width": 640,            # optional
      "height": 480,           # optional
      "keypoints": [[x, y], ...],
      "descriptors": [[...], ...]
    }

Reports are plain text with a fixed field order so golden tests and the
determinism check can compare bytes. Floats use 9 significant digits.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

from .errors import InputError
from .features import FeatureSet, KeyPoint
from .metrics import MatchReport

FORMAT_VERSION = 1


def parse_features(text: str, normalize: bool = True, source: str = "<string>") -> FeatureSet:
    """Parse a feature document; descriptor rows are L2-normalized unless disabled."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{source}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise InputError(f"{source}: top level must be an object")
    version = doc.get("format")
    if version != FORMAT_VERSION:
        raise InputError(f"{source}: unsupported format version {version!r} (expected {FORMAT_VERSION})")
    for field in ("image", "keypoints", "descriptors"):
        if field not in doc:
            raise InputError(f"{source}: missing field {field!r}")
    try:
        keypoints = tuple(KeyPoint(float(x), float(y)) for x, y in doc["keypoints"])
    except (TypeError, ValueError) as exc:
        raise InputError(f"{source}: keypoints must be [x, y] number pairs: {exc}") from exc
    fs = FeatureSet(
        image_id=str(doc["image"]),
        keypoints=keypoints,
        descriptors=doc["descriptors"],
        image_width=doc.get("width"),
        image_height=doc.get("height"),
    )
    return fs.normalized() if normalize else fs


def load_features(path: str | Path, normalize: bool = True) -> FeatureSet:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    return parse_features(text, normalize=normalize, source=str(path))


def serialize_features(fs: FeatureSet) -> str:
    doc = {
        "format": FORMAT_VERSION,
        "image": fs.image_id,
        "keypoints": [[kp.x, kp.y] for kp in fs.keypoints],
        "descriptors": fs.descriptors.tolist(),
    }
    if fs.image_width is not None:
        doc["width"] = fs.image_width
    if fs.image_height is not None:
        doc["height"] = fs.image_height
    return json.dumps(doc, sort_keys=True)


def feature_digest(fs: FeatureSet) -> str:
    """Content hash of the exact node set a method was fed."""
    return hashlib.sha256(serialize_features(fs).encode()).hexdigest()[:16]


def fmt(value: float) -> str:
    return format(float(value), ".9g")


def render_report(
    report: MatchReport,
    config_echo: dict | None = None,
    inputs_digest: str | None = None,
) -> str:
    """Fixed-field-order text rendering of one MatchReport."""
    lines = [f"method\t{report.method}"]
    if inputs_digest is not None:
        lines.append(f"inputs_digest\t{inputs_digest}")
    lines.append(f"n1\t{report.assignment.n1}")
    lines.append(f"n2\t{report.assignment.n2}")
    lines.append(f"edge_error\t{fmt(report.edge_error)}")
    lines.append(f"node_error\t{fmt(report.node_error)}")
    lines.append(f"total_error\t{fmt(report.total_error)}")
    lines.append(
        f"decomposition\t{fmt(report.total_error)} = {fmt(report.edge_error)} + {fmt(report.node_error)}"
    )
    if config_echo:
        for key in sorted(config_echo):
            lines.append(f"config.{key}\t{config_echo[key]}")
    if report.trace is not None:
        tr = report.trace
        lines.append(f"trace.outer_stages\t{tr.outer_stages}")
        lines.append(f"trace.inner_iterations\t{','.join(str(i) for i in tr.inner_iterations)}")
        lines.append(f"trace.converged\t{','.join('1' if c else '0' for c in tr.converged)}")
        lines.append(f"trace.final_beta\t{fmt(tr.final_beta)}")
        if tr.objective_history:
            lines.append(f"trace.final_objective\t{fmt(tr.objective_history[-1])}")
    lines.append(f"pairs\t{len(report.assignment.pairs)}")
    for i, j in report.assignment.pairs:
        lines.append(f"pair\t{i}\t{j}")
    return "\n".join(lines) + "\n"
