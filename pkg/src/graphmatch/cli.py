"""Command-line surface.

Subcommands: match (solver only), baseline, compare (both + report), viz,
oracle. A JSON config file may set flag defaults; explicit flags override.
Exit codes: 0 success, 2 input error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from .errors import InputError, NumericalError
from .io import load_features, render_report
from .metrics import MatchReport
from .pipeline import (
    RunConfig,
    run_baseline,
    run_compare,
    run_gsspf,
    run_oracle,
    select_inputs,
)
from .solver import PRESET_LARGE, PRESET_SMALL, SolverConfig
from .viz import render_svg, save_figures

log = logging.getLogger("graphmatch")

SOLVER_FLAGS = ("alpha", "lam", "beta0", "beta_r", "beta_m", "eps1", "eps2",
                "max_inner", "sinkhorn_max_iters")
RUN_FLAGS = SOLVER_FLAGS + ("top", "k", "ratio", "normalize_adjacency",
                            "normalize_descriptors", "preset")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="graphmatch",
        description="Detect similarity between two images by matching their keypoint graphs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("file_a", help="feature file for the first image")
        p.add_argument("file_b", help="feature file for the second image")
        p.add_argument("--config", help="JSON file of flag defaults")
        p.add_argument("--out", "-o", help="report output path (default: stdout)")
        p.add_argument("--alpha", type=float, help="fixed-point step fraction in (0,1]")
        p.add_argument("--lambda", dest="lam", type=float, help="node-term weight")
        p.add_argument("--beta0", type=float, help="initial softmax sharpness")
        p.add_argument("--beta-r", dest="beta_r", type=float, help="sharpness growth factor")
        p.add_argument("--beta-m", dest="beta_m", type=float, help="sharpness cap")
        p.add_argument("--eps1", type=float, help="fixed-point tolerance")
        p.add_argument("--eps2", type=float, help="Sinkhorn tolerance")
        p.add_argument("--max-inner", dest="max_inner", type=int,
                       help="fixed-point iterations per sharpness stage")
        p.add_argument("--sinkhorn-max-iters", dest="sinkhorn_max_iters", type=int)
        p.add_argument("--preset", choices=("large", "small"),
                       help="sharpness preset: large (500-point) or small images")
        p.add_argument("--top", "-T", type=int, help="top-T feature pre-selection (0 = off)")
        p.add_argument("-k", dest="k", type=int, help="baseline candidate count")
        p.add_argument("--ratio", type=float, help="baseline ratio test threshold (off by default)")
        p.add_argument("--normalize-adjacency", action="store_const", const=True,
                       dest="normalize_adjacency", help="divide adjacency by its max entry")
        p.add_argument("--no-normalize-descriptors", action="store_const", const=False,
                       dest="normalize_descriptors",
                       help="keep raw descriptor scales (L2 normalization is on by default)")
        p.add_argument("--viz", help="write correspondence SVG(s) with this path prefix")
        p.add_argument("--figures", help="directory for matplotlib figure files")
        p.set_defaults(normalize_adjacency=None, normalize_descriptors=None)
        return p

    add_common(sub.add_parser("match", help="run the graph-matching solver only"))
    add_common(sub.add_parser("baseline", help="run the point-matching baseline only"))
    add_common(sub.add_parser("compare", help="run both methods on identical inputs"))
    add_common(sub.add_parser("oracle", help="exhaustive optimum (small instances only)"))
    viz = add_common(sub.add_parser("viz", help="render a correspondence SVG"))
    viz.add_argument("--method", choices=("gsspf", "baseline"), default="gsspf")
    return parser


def resolve_config(args: argparse.Namespace) -> tuple[RunConfig, bool]:
    """Merge built-in defaults, config file values, preset, then explicit flags."""
    file_defaults = {}
    if args.config:
        try:
            file_defaults = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot load config {args.config}: {exc}") from exc
        unknown = set(file_defaults) - set(RUN_FLAGS)
        if unknown:
            raise InputError(f"unknown config keys: {sorted(unknown)}")

    merged = dict(file_defaults)
    preset = args.preset or merged.pop("preset", None)
    if preset:
        merged.update(PRESET_LARGE if preset == "large" else PRESET_SMALL)
    for name in RUN_FLAGS:
        if name == "preset":
            continue
        value = getattr(args, name, None)
        if value is not None:
            merged[name] = value

    solver_kwargs = {k: merged[k] for k in SOLVER_FLAGS if k in merged}
    solver = SolverConfig(**solver_kwargs)
    run = RunConfig(
        solver=solver,
        top=int(merged.get("top", 0)),
        k=int(merged.get("k", 2)),
        ratio=merged.get("ratio"),
        normalize_adjacency=bool(merged.get("normalize_adjacency", False)),
    )
    normalize_descriptors = bool(merged.get("normalize_descriptors", True))
    return run, normalize_descriptors


def config_echo(cfg: RunConfig) -> dict:
    s = cfg.solver
    echo = {name: getattr(s, name) for name in SOLVER_FLAGS}
    echo.update(top=cfg.top, k=cfg.k, ratio=cfg.ratio,
                normalize_adjacency=cfg.normalize_adjacency)
    return echo


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _write_svg(args, reports: list[MatchReport], fa, fb):
    if not args.viz:
        return
    for report in reports:
        path = Path(f"{args.viz}_{report.method}.svg")
        path.write_text(render_svg(fa, fb, report))
        log.info("wrote %s", path)


def _write_figures(args, reports: list[MatchReport], fa, fb):
    if not args.figures:
        return
    stem = Path(args.file_a).stem + "_vs_" + Path(args.file_b).stem
    for report in reports:
        for path in save_figures(fa, fb, report, args.figures, stem):
            log.info("wrote %s", path)


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=os.environ.get("GRAPHMATCH_LOG", "WARNING").upper(),
                        format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        cfg, normalize_descriptors = resolve_config(args)
        fa = load_features(args.file_a, normalize=normalize_descriptors)
        fb = load_features(args.file_b, normalize=normalize_descriptors)
        echo = config_echo(cfg)

        if args.command == "compare":
            solver_rep, base_rep, sel_a, sel_b, digests = run_compare(fa, fb, cfg)
            text = (render_report(solver_rep, echo, f"{digests[0]} {digests[1]}")
                    + "\n"
                    + render_report(base_rep, echo, f"{digests[0]} {digests[1]}"))
            _emit(text, args.out)
            _write_svg(args, [solver_rep, base_rep], sel_a, sel_b)
            _write_figures(args, [solver_rep, base_rep], sel_a, sel_b)
        elif args.command in ("match", "baseline", "oracle", "viz"):
            sel_a, sel_b = select_inputs(fa, fb, cfg)
            runner = {
                "match": run_gsspf,
                "baseline": run_baseline,
                "oracle": run_oracle,
                "viz": run_gsspf if getattr(args, "method", "gsspf") == "gsspf" else run_baseline,
            }[args.command]
            report = runner(sel_a, sel_b, cfg)
            if args.command == "viz":
                svg = render_svg(sel_a, sel_b, report)
                _emit(svg, args.out)
            else:
                _emit(render_report(report, echo), args.out)
                _write_svg(args, [report], sel_a, sel_b)
            _write_figures(args, [report], sel_a, sel_b)
        return 0
    except InputError as exc:
        log.error("%s", exc)
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        log.error("%s", exc)
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
