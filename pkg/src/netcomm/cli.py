"""Command-line pipeline: build -> stats -> detect -> chisq -> layout.

Exit codes: 0 success, 2 usage/input problems, 3 violated algorithm
preconditions (e.g. spinglass on a disconnected graph).  Every command
writes a run manifest (OUT.manifest.json) recording inputs, parameters and
seeds; outputs themselves are byte-reproducible for fixed seeds.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import tempfile
from datetime import datetime, timezone

from . import __version__
from .chisq import DEFAULT_REPLICATES, chi_square_grid, format_report_grid
from .community import (ALGORITHMS, Partition, girvan_newman,
                        leading_eigenvector, spinglass, walktrap)
from .errors import ConnectivityError, InputError, NetcommError
from .export import export_graph, graph_from_json
from .graph import connected_components, induced_subgraph, read_edge_tsv
from .ingest import (CHARACTERISTICS, build_coauthorship, load_attributes,
                     parse_publications)
from .layout import DEFAULT_ITERATIONS, fruchterman_reingold
from .netstats import eigenvector_centrality, summary
from .svg import community_attribute_views, community_size_chart, \
    community_size_csv, render_svg


def write_atomic(path: str, text: str) -> None:
    """Write via temp file + rename so readers never see partial output."""
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".netcomm-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _sha256(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def write_manifest(out_path: str, command: str, inputs: list[str],
                   parameters: dict, seed=None) -> None:
    doc = {
        "tool": "netcomm",
        "version": __version__,
        "command": command,
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "inputs": {p: _sha256(p) for p in inputs},
        "parameters": parameters,
        "seed": seed,
    }
    write_atomic(out_path + ".manifest.json",
                 json.dumps(doc, indent=2, sort_keys=False) + "\n")


def _load_graph(path: str):
    with open(path, encoding="utf-8") as fh:
        return graph_from_json(fh.read())


def cmd_build(args) -> int:
    if bool(args.pubs) == bool(args.edges):
        raise InputError("exactly one of --pubs or --edges is required")
    if args.pubs:
        g = build_coauthorship(parse_publications(args.pubs))
        src = args.pubs
    else:
        g = read_edge_tsv(args.edges)
        src = args.edges
    write_atomic(args.out, export_graph(g, fmt="json"))
    write_manifest(args.out, "build", [src],
                   {"pubs": args.pubs, "edges": args.edges, "out": args.out})
    print(f"wrote {args.out}: {g.n_vertices} vertices, {g.n_edges} edges")
    return 0


def cmd_detect(args) -> int:
    if args.dendrogram and args.algo not in ("walktrap", "eb"):
        raise InputError(f"--algo {args.algo} produces no dendrogram")
    g, _, _ = _load_graph(args.graph)
    dendrogram = None
    excluded = 0
    if args.algo == "spinglass":
        if args.seed is None:
            raise InputError("--seed is required for --algo spinglass")
        target = g
        if args.largest_component:
            comps = connected_components(g)
            if len(comps) > 1:
                target, _ = induced_subgraph(g, comps[0])
                excluded = g.n_vertices - target.n_vertices
        part = spinglass(target, q_max=args.q_max, gamma=args.gamma,
                         t_start=args.t_start, t_stop=args.t_stop,
                         cooling=args.cooling, seed=args.seed)
        if args.largest_component:
            print(f"largest component kept; excluded {excluded} vertices")
    elif args.algo == "lev":
        part = leading_eigenvector(g, tol=args.tol)
    elif args.algo == "walktrap":
        dendrogram, part = walktrap(g, t=args.walk_steps)
    else:
        dendrogram, part = girvan_newman(g)

    write_atomic(args.out, part.to_csv())
    if args.dendrogram:
        write_atomic(args.dendrogram, dendrogram.to_json())
    if args.sizes_csv:
        write_atomic(args.sizes_csv, community_size_csv(part))
    if args.sizes_svg:
        write_atomic(args.sizes_svg, community_size_chart(part))
    write_manifest(args.out, "detect", [args.graph], {
        "algo": args.algo, "walk_steps": args.walk_steps, "tol": args.tol,
        "q_max": args.q_max, "gamma": args.gamma, "t_start": args.t_start,
        "t_stop": args.t_stop, "cooling": args.cooling,
        "largest_component": bool(args.largest_component),
        "excluded_vertices": excluded, "out": args.out,
    }, seed=args.seed)
    print(f"wrote {args.out}: {part.n_communities} communities")
    return 0


def _parse_membership_args(pairs, g):
    partitions = {}
    excluded = {}
    paths = []
    for item in pairs:
        if "=" in item:
            name, path = item.split("=", 1)
        else:
            path = item
            name = os.path.splitext(os.path.basename(path))[0]
        if name in partitions:
            raise InputError(f"duplicate membership name {name!r}")
        with open(path, encoding="utf-8") as fh:
            part = Partition.from_csv(fh.read(), graph=g)
        partitions[name] = part
        excluded[name] = g.n_vertices - len(part.labels)
        paths.append(path)
    return partitions, excluded, paths


def cmd_chisq(args) -> int:
    g, _, embedded_attrs = _load_graph(args.graph)
    attrs = load_attributes(args.attrs) if args.attrs else embedded_attrs
    if attrs is None:
        raise InputError("--attrs is required (graph has no embedded attributes)")
    partitions, excluded, paths = _parse_membership_args(args.membership, g)
    characteristics = args.characteristic or list(CHARACTERISTICS)
    report = chi_square_grid(partitions, attrs,
                             characteristics=characteristics,
                             replicates=args.replicates, seed=args.seed,
                             excluded=excluded)
    write_atomic(args.out, json.dumps(report, indent=2) + "\n")
    write_manifest(args.out, "chisq",
                   [args.graph, *paths] + ([args.attrs] if args.attrs else []),
                   {"membership": list(args.membership),
                    "characteristics": characteristics,
                    "replicates": args.replicates, "out": args.out},
                   seed=args.seed)
    sys.stdout.write(format_report_grid(report, replicates=args.replicates,
                                        seed=args.seed))
    return 0


def cmd_stats(args) -> int:
    g, _, _ = _load_graph(args.graph)
    report = summary(g, gamma_method=args.gamma_method,
                     clique_min_size=args.min_clique_size)
    write_atomic(args.out, report.to_json())
    write_manifest(args.out, "stats", [args.graph],
                   {"gamma_method": args.gamma_method,
                    "min_clique_size": args.min_clique_size, "out": args.out})
    print(f"wrote {args.out}")
    return 0


def cmd_layout(args) -> int:
    g, embedded_part, embedded_attrs = _load_graph(args.graph)
    inputs = [args.graph] + [p for p in (args.membership, args.attrs) if p]
    part = embedded_part
    if args.membership:
        with open(args.membership, encoding="utf-8") as fh:
            part = Partition.from_csv(fh.read(), graph=g)
        if len(part.labels) != g.n_vertices:
            missing = sorted(set(g.labels) - set(part.labels))
            raise InputError("membership does not cover the graph; missing "
                             + ", ".join(repr(x) for x in missing[:5]))
    attrs = load_attributes(args.attrs) if args.attrs else embedded_attrs

    color_by = None
    if args.color_by == "membership":
        if part is None:
            raise InputError("--color-by membership needs --membership or an "
                             "annotated graph")
        color_by = part
    elif args.color_by in CHARACTERISTICS:
        if attrs is None:
            raise InputError(f"--color-by {args.color_by} needs --attrs")
        color_by = (attrs, args.color_by)

    size_by = None
    if args.size_by == "centrality":
        size_by = eigenvector_centrality(g)

    if args.focus_community is not None:
        if part is None or attrs is None:
            raise InputError("--focus-community needs membership and attributes")
        prefix = args.out_prefix or os.path.splitext(args.out)[0]
        views = community_attribute_views(g, part, attrs,
                                          args.focus_community,
                                          iterations=args.iterations,
                                          seed=args.seed, size_by=size_by)
        for char, doc in views.items():
            write_atomic(f"{prefix}.{char}.svg", doc)
        write_manifest(f"{prefix}.views", "layout", inputs,
                       {"focus_community": args.focus_community,
                        "iterations": args.iterations},
                       seed=args.seed)
        print(f"wrote {len(views)} community views to {prefix}.*.svg")
        return 0

    coords = fruchterman_reingold(g, iterations=args.iterations,
                                  seed=args.seed)
    doc = render_svg(g, coords, color_by=color_by, size_by=size_by,
                     min_radius=args.min_radius, max_radius=args.max_radius)
    write_atomic(args.out, doc)
    write_manifest(args.out, "layout", inputs,
                   {"iterations": args.iterations, "color_by": args.color_by,
                    "size_by": args.size_by, "out": args.out},
                   seed=args.seed)
    print(f"wrote {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="netcomm",
        description="Coauthorship network statistics, community detection, "
                    "and community/attribute independence tests.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="build a graph from publications JSONL "
                                     "or an edge TSV")
    p.add_argument("--pubs", help="publications JSONL file")
    p.add_argument("--edges", help="edge list TSV file")
    p.add_argument("--out", required=True, help="output graph JSON")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("detect", help="detect communities")
    p.add_argument("graph", help="graph JSON from `netcomm build`")
    p.add_argument("--algo", required=True, choices=ALGORITHMS)
    p.add_argument("--out", required=True, help="membership CSV output")
    p.add_argument("--seed", type=int, help="RNG seed (required for spinglass)")
    p.add_argument("--walk-steps", type=int, default=4,
                   help="walktrap random-walk length t")
    p.add_argument("--tol", type=float, default=1e-10,
                   help="leading-eigenvector tolerance")
    p.add_argument("--q-max", type=int, default=25,
                   help="spinglass maximum spin states")
    p.add_argument("--gamma", type=float, default=1.0,
                   help="spinglass resolution")
    p.add_argument("--t-start", type=float, default=1.0)
    p.add_argument("--t-stop", type=float, default=0.01)
    p.add_argument("--cooling", type=float, default=0.99)
    p.add_argument("--largest-component", action="store_true",
                   help="run spinglass on the largest component of a "
                        "disconnected graph")
    p.add_argument("--dendrogram", help="write merge hierarchy JSON "
                                        "(walktrap/eb only)")
    p.add_argument("--sizes-csv", help="write community size CSV")
    p.add_argument("--sizes-svg", help="write community size bar chart SVG")
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("chisq", help="chi-square Monte Carlo independence grid")
    p.add_argument("graph")
    p.add_argument("--membership", action="append", required=True,
                   metavar="NAME=FILE", help="membership CSV (repeatable)")
    p.add_argument("--attrs", help="attribute CSV")
    p.add_argument("--characteristic", action="append",
                   choices=CHARACTERISTICS,
                   help="characteristic to test (repeatable; default all)")
    p.add_argument("--replicates", type=int, default=DEFAULT_REPLICATES)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True, help="report JSON output")
    p.set_defaults(func=cmd_chisq)

    p = sub.add_parser("stats", help="whole-network statistics report")
    p.add_argument("graph")
    p.add_argument("--out", required=True)
    p.add_argument("--gamma-method", choices=("loglog-ls", "discrete-mle"),
                   default="loglog-ls")
    p.add_argument("--min-clique-size", type=int, default=3)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("layout", help="force-directed layout SVG")
    p.add_argument("graph")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--iterations", type=int, default=DEFAULT_ITERATIONS)
    p.add_argument("--color-by",
                   choices=("membership",) + CHARACTERISTICS)
    p.add_argument("--size-by", choices=("centrality", "uniform"),
                   default="uniform")
    p.add_argument("--membership", help="membership CSV for coloring")
    p.add_argument("--attrs", help="attribute CSV for coloring")
    p.add_argument("--min-radius", type=float, default=4.0)
    p.add_argument("--max-radius", type=float, default=14.0)
    p.add_argument("--focus-community", type=int,
                   help="render per-attribute views of one community")
    p.add_argument("--out-prefix", help="filename prefix for community views")
    p.set_defaults(func=cmd_layout)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        return args.func(args)
    except ConnectivityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (NetcommError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
