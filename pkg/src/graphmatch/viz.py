"""Correspondence rendering: a deterministic side-by-side SVG, plus optional
matplotlib figures saved next to the text report."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .features import FeatureSet
from .io import fmt
from .metrics import MatchReport


@dataclass(frozen=True)
class Layout:
    point_radius: float = 3.0
    gap: float = 40.0      # horizontal space between the two panels
    margin: float = 20.0


def render_svg(f1: FeatureSet, f2: FeatureSet, report: MatchReport,
               layout: Layout | None = None) -> str:
    """Both point sets side by side, one line per assignment pair.

    Output is built from formatted strings only, so identical inputs give
    byte-identical documents.
    """
    lay = layout or Layout()
    c1, c2 = f1.coords(), f2.coords()
    w1 = _extent(f1, c1, axis=0)
    h1 = _extent(f1, c1, axis=1)
    w2 = _extent(f2, c2, axis=0)
    h2 = _extent(f2, c2, axis=1)
    off_x = lay.margin + w1 + lay.gap
    width = off_x + w2 + lay.margin
    height = max(h1, h2) + 2 * lay.margin

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{fmt(width)}" height="{fmt(height)}" '
        f'viewBox="0 0 {fmt(width)} {fmt(height)}">',
        f"<!-- method: {report.method}; total_error: {fmt(report.total_error)} -->",
    ]
    for i, j in report.assignment.pairs:
        x1, y1 = c1[i, 0] + lay.margin, c1[i, 1] + lay.margin
        x2, y2 = c2[j, 0] + off_x, c2[j, 1] + lay.margin
        parts.append(
            f'<line x1="{fmt(x1)}" y1="{fmt(y1)}" x2="{fmt(x2)}" y2="{fmt(y2)}" '
            f'stroke="green" stroke-width="1"/>'
        )
    for x, y in c1:
        parts.append(_circle(x + lay.margin, y + lay.margin, lay.point_radius, "crimson"))
    for x, y in c2:
        parts.append(_circle(x + off_x, y + lay.margin, lay.point_radius, "royalblue"))
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def save_figures(f1: FeatureSet, f2: FeatureSet, report: MatchReport,
                 out_dir: str | Path, stem: str) -> list[Path]:
    """Render matplotlib figures for the report: the correspondence overlay
    and, when a solver trace is present, the objective history."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []

    c1, c2 = f1.coords(), f2.coords()
    off = c1[:, 0].max() - c2[:, 0].min() + 50.0
    fig, ax = plt.subplots(figsize=(8, 5))
    ax.scatter(c1[:, 0], c1[:, 1], s=14, c="crimson", label=f1.image_id)
    ax.scatter(c2[:, 0] + off, c2[:, 1], s=14, c="royalblue", label=f2.image_id)
    for i, j in report.assignment.pairs:
        ax.plot([c1[i, 0], c2[j, 0] + off], [c1[i, 1], c2[j, 1]],
                color="green", linewidth=0.6, alpha=0.7)
    ax.invert_yaxis()  # image convention: y grows downward
    ax.set_aspect("equal")
    ax.legend(loc="upper center", ncol=2, fontsize=8)
    ax.set_title(f"{report.method}: total error {report.total_error:.6g}")
    path = out_dir / f"{stem}_{report.method}_correspondence.png"
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    written.append(path)

    if report.trace is not None and report.trace.objective_history:
        fig, ax = plt.subplots(figsize=(6, 3.5))
        ax.plot(report.trace.objective_history, linewidth=1.0)
        ax.set_xlabel("inner iteration (all stages)")
        ax.set_ylabel("objective")
        ax.set_title(f"{report.method}: objective history")
        path = out_dir / f"{stem}_{report.method}_objective.png"
        fig.savefig(path, dpi=120, bbox_inches="tight")
        plt.close(fig)
        written.append(path)
    return written


def _extent(fs: FeatureSet, coords, axis: int) -> float:
    sized = fs.image_width if axis == 0 else fs.image_height
    if sized is not None:
        return float(sized)
    return float(coords[:, axis].max())


def _circle(x: float, y: float, r: float, color: str) -> str:
    return f'<circle cx="{fmt(x)}" cy="{fmt(y)}" r="{fmt(r)}" fill="{color}"/>'
