"""Command-line interface: ``spine extract|components|evaluate|sweep``.

Exit codes: 0 success, 2 usage or input problems, 3 semantic validation
failures (e.g. backbone not contained in the original), 4 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from importlib import resources
from pathlib import Path

from spine.community import detect, write_partition
from spine.components import extract_component_structure
from spine.distances import NumericalError
from spine.evaluation import ContainmentError, EvaluationOptions, evaluate, sweep, write_sweep_csv
from spine.filters import Backbone, disparity_filter
from spine.graph import GraphError, load_edge_list, write_edge_list
from spine.multilevel import ExtractionPlan, extract

logger = logging.getLogger("spine")

BUNDLED = ("karate.edges", "lesmis.edges")


class UsageError(Exception):
    pass


def bundled_path(name: str) -> Path:
    return Path(str(resources.files("spine") / "data" / name))


def resolve_input(path: str) -> Path:
    """Use ``path`` if it exists, else fall back to a bundled dataset of that name."""
    p = Path(path)
    if p.exists():
        return p
    if p.name in BUNDLED:
        return bundled_path(p.name)
    raise UsageError(f"input file not found: {path}")


def parse_seed(value: str):
    if value == "auto":
        return "auto"
    try:
        return int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer or 'auto', got {value!r}") from None


def parse_fractions(text: str) -> list[float]:
    """``"0.1:0.9:0.1"`` (start:stop:step, inclusive) or ``"0.1,0.3,1.0"``."""
    text = text.strip()
    if not text:
        return []
    if ":" in text:
        try:
            start, stop, step = (float(x) for x in text.split(":"))
        except ValueError:
            raise UsageError(f"bad fraction range {text!r}; expected start:stop:step") from None
        if step <= 0:
            raise UsageError("fraction step must be positive")
        out, i = [], 0
        while start + i * step <= stop + 1e-9:
            out.append(round(start + i * step, 10))
            i += 1
        return out
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"bad fraction list {text!r}") from None


def _dump_json(obj, path: Path) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _emit(args, summary: dict, text: str) -> None:
    if args.json:
        print(json.dumps(summary, sort_keys=True))
    else:
        print(text)


def cmd_extract(args) -> int:
    if args.fraction is not None and args.alpha is not None:
        raise UsageError("--fraction and --alpha are mutually exclusive")
    g = load_edge_list(resolve_input(args.input))
    if args.alpha is not None:
        if args.filter not in ("df", "disparity") or args.mode != "classical":
            raise UsageError("--alpha is only available for the classical disparity filter")
        bb = disparity_filter(g, alpha=args.alpha)
        bb.provenance.update({"mode": "classical", "partition_seed": None})
    else:
        fraction = 0.3 if args.fraction is None else args.fraction
        plan = ExtractionPlan(args.filter, fraction, args.seed, args.mode)
        bb = extract(g, plan)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_edge_list(bb.graph, out / "backbone.edges")
    prov = dict(bb.provenance, input=str(args.input), nodes=bb.n_nodes, edges=bb.n_edges)
    _dump_json(prov, out / "provenance.json")
    _emit(args, {"nodes": bb.n_nodes, "edges": bb.n_edges, "out": str(out)},
          f"backbone: V={bb.n_nodes} E={bb.n_edges} -> {out / 'backbone.edges'}")
    return 0


def cmd_components(args) -> int:
    g = load_edge_list(resolve_input(args.input))
    part = detect(g, args.seed)
    cs = extract_component_structure(g, part)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    manifest = {"input": str(args.input), "partition_seed": part.seed, "communities": part.community_count, "components": []}
    for comp in cs.components:
        name = f"{comp.kind}_{comp.index}.edges"
        write_edge_list(comp.graph, out / name)
        manifest["components"].append({
            "kind": comp.kind, "index": comp.index, "file": name,
            "nodes": comp.graph.n_nodes, "edges": comp.graph.n_edges,
        })
    write_partition(g, part, out / "partition.tsv")
    _dump_json(manifest, out / "manifest.json")
    _emit(args, {"locals": len(cs.locals), "globals": len(cs.globals), "communities": part.community_count},
          f"{len(cs.locals)} local and {len(cs.globals)} global components ({part.community_count} communities)")
    return 0


def cmd_evaluate(args) -> int:
    original = load_edge_list(resolve_input(args.original))
    bpath = Path(args.backbone)
    if not bpath.exists():
        raise UsageError(f"backbone file not found: {args.backbone}")
    bg = load_edge_list(bpath)
    prov_path = bpath.with_name("provenance.json")
    prov = json.loads(prov_path.read_text(encoding="utf-8")) if prov_path.exists() else {}
    report = evaluate(original, Backbone(bg, prov), EvaluationOptions(seed=args.seed, force_spectral=args.force_spectral))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.json").write_text(report.to_json() + "\n", encoding="utf-8")
    head = report.headline()
    width = max(len(k) for k in head)
    lines = [f"{k:<{width}}  {'n/a' if v is None else (f'{v:.4f}' if isinstance(v, float) else v)}" for k, v in head.items()]
    _emit(args, head, "\n".join(lines))
    return 0


def _sweep_one(payload):
    g, plan, f, opts = payload
    return sweep(g, plan, [f], opts)


def cmd_sweep(args) -> int:
    fractions = parse_fractions(args.fractions)
    if not fractions:
        raise UsageError("empty fractions list")
    if any(not 0.0 < f <= 1.0 for f in fractions):
        raise UsageError("fractions must lie in (0, 1]")
    fractions = sorted(fractions)
    g = load_edge_list(resolve_input(args.input))
    plan = ExtractionPlan(args.filter, fractions[0], args.seed, "multilevel")
    part = detect(g, args.seed)
    opts = EvaluationOptions(seed=args.seed, force_spectral=args.force_spectral, partition=part)
    if args.jobs > 1 and len(fractions) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            chunks = list(pool.map(_sweep_one, [(g, plan, f, opts) for f in fractions]))
        rows = [row for chunk in chunks for row in chunk]
    else:
        rows = sweep(g, plan, fractions, opts)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_sweep_csv(rows, out / "sweep.csv")
    _emit(args, {"rows": len(rows), "fractions": fractions, "out": str(out / "sweep.csv")},
          f"{len(rows)} rows over {len(fractions)} fraction(s) -> {out / 'sweep.csv'}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    default_seed = parse_seed(os.environ.get("SPINE_SEED", "auto"))
    parser = argparse.ArgumentParser(prog="spine", description="Classical and multilevel backbone extraction.")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    parser.add_argument("--json", action="store_true", help="print a machine-readable summary")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, seed=True):
        p.add_argument("--out", default=".", help="output directory")
        if seed:
            p.add_argument("--seed", type=parse_seed, default=default_seed,
                           help="Louvain seed, or 'auto' for best of 10 (default: $SPINE_SEED or auto)")
        p.add_argument("--json", action="store_true", default=argparse.SUPPRESS)

    p = sub.add_parser("extract", help="extract a backbone")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--filter", choices=["gt", "df", "global_threshold", "disparity"], default="gt")
    p.add_argument("--mode", choices=["classical", "multilevel"], default="multilevel")
    p.add_argument("--fraction", type=float)
    p.add_argument("--alpha", type=float)
    common(p)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("components", help="dump local and global components")
    p.add_argument("--in", dest="input", required=True)
    common(p)
    p.set_defaults(func=cmd_components)

    p = sub.add_parser("evaluate", help="compare a backbone with its original graph")
    p.add_argument("--original", "--in", dest="original", required=True)
    p.add_argument("--backbone", required=True)
    p.add_argument("--force-spectral", action="store_true")
    common(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("sweep", help="evaluate both modes over a range of fractions")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--filter", choices=["gt", "df", "global_threshold", "disparity"], default="gt")
    p.add_argument("--fractions", default="0.1:0.9:0.1", help="start:stop:step or comma list")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--force-spectral", action="store_true")
    common(p)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (UsageError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ContainmentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (GraphError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (NumericalError, FloatingPointError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
