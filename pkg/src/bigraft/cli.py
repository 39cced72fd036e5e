"""The command-line surface.

Every subcommand reads a graft document from ``--input`` (or stdin), prints
a deterministic report in the requested format, and exits 0 on success, 1
when a verification-style command finds a failure, and 2 on usage or input
errors.  Anything time-dependent goes to stderr so identical invocations
stay byte-identical on stdout.
"""

from __future__ import annotations

import argparse
import json
import sys

from .cathedral import (
    cathedral_poset,
    enumerate_critical_sets,
    upper_bound_check,
)
from .combs import (
    build_graft_ear_decomposition,
    classify_comb,
    is_critical_quasicomb,
    verify_graft_ear_decomposition,
)
from .core import (
    CapacityError,
    Graft,
    GraftInputError,
    GraftValidationError,
    InternalConsistencyError,
    OrderedBipartiteGraft,
    PreconditionError,
    sorted_vertices,
)
from .decomposition import (
    factor_components,
    kl_classes_of_component,
    kl_partition,
)
from .formats import (
    REPORT_SCHEMA,
    decomposition_document,
    export_dot,
    graft_document,
    parse_graft_json,
    poset_document,
    upper_report_document,
)
from .generators import GenConfig, generate
from .joins import f_distance, min_join, min_join_bruteforce
from .properties import run_property_suite, suite_report_document


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", metavar="FILE",
                        help="graft JSON document (default: stdin)")
    common.add_argument("--seed", type=int, default=0, metavar="N",
                        help="PRNG seed for verify and gen (default 0)")
    common.add_argument("--format", choices=("json", "dot", "text"),
                        default="text", help="output format (default text)")
    common.add_argument("--oracle", action="store_true",
                        help="force the brute-force join backend")
    common.add_argument("--max-brute", type=int, default=22, metavar="N",
                        help="edge cap for brute-force enumeration (default 22)")

    parser = argparse.ArgumentParser(
        prog="bigraft",
        description="canonical decompositions of bipartite grafts")
    sub = parser.add_subparsers(dest="command", required=True)

    def cmd(name, handler, help_text, **kwargs):
        p = sub.add_parser(name, parents=[common], help=help_text, **kwargs)
        p.set_defaults(handler=handler)
        return p

    cmd("analyze", _cmd_analyze,
        "full report: join size, components, classes, order")
    cmd("min-join", _cmd_min_join, "one minimum join")
    p = cmd("dist", _cmd_dist, "join-induced distance between two vertices")
    p.add_argument("u")
    p.add_argument("v")
    cmd("components", _cmd_components, "factor components")
    cmd("kl", _cmd_kl, "vertex classes per factor component")
    cmd("classify", _cmd_classify, "comb / quasicomb / neither")
    p = cmd("critical", _cmd_critical,
            "verify criticality for a root (exit 1 when it fails)")
    p.add_argument("root")
    p = cmd("ear-decomp", _cmd_ear_decomp,
            "build and verify an ear decomposition for a root")
    p.add_argument("root")
    p = cmd("critical-sets", _cmd_critical_sets,
            "enumerate the critical sets of a factor component")
    p.add_argument("component")
    cmd("poset", _cmd_poset, "the order over factor components")
    p = cmd("upper", _cmd_upper,
            "check the attachment of everything above a component")
    p.add_argument("component")
    p = cmd("verify", _cmd_verify,
            "run the randomized property suite (exit 1 on any failure)")
    p.add_argument("--trials", type=int, default=100, metavar="N",
                   help="instances per property (default 100)")
    p.add_argument("--properties", metavar="NAMES",
                   help="comma-separated property names (default: all)")
    p = cmd("gen", _cmd_gen, "generate a random instance")
    p.add_argument("--mode", choices=("graft", "comb", "critical-quasicomb"),
                   default="graft")
    p.add_argument("--min-vertices", type=int, default=4, metavar="N")
    p.add_argument("--max-vertices", type=int, default=10, metavar="N")
    p.add_argument("--edge-density", type=float, default=0.35, metavar="X")
    p.add_argument("--terminal-density", type=float, default=0.5, metavar="X")
    p.add_argument("--budget", type=int, default=300, metavar="N")
    return parser


# ---------------------------------------------------------------------------
# Shared plumbing.
# ---------------------------------------------------------------------------

def _load_graft(args) -> Graft:
    if args.input is not None:
        with open(args.input, "r", encoding="utf-8") as fh:
            text = fh.read()
    else:
        text = sys.stdin.read()
    return parse_graft_json(text)


def _need_bipartite(g: Graft) -> OrderedBipartiteGraft:
    if not isinstance(g, OrderedBipartiteGraft):
        raise GraftInputError("this command needs a bipartition in the input")
    return g


def _resolve_vertex(g: Graft, token: str):
    if token in g.graph.vertices:
        return token
    try:
        as_int = int(token)
    except ValueError:
        as_int = None
    if as_int is not None and as_int in g.graph.vertices:
        return as_int
    raise GraftInputError(f"unknown vertex id {token!r}")


def _join_backend(g: Graft, args):
    if args.oracle:
        return min_join_bruteforce(g, max_edges=args.max_brute)
    return min_join(g)


def _emit(args, text_lines, jdoc, dot_text=None) -> None:
    if args.format == "json":
        print(json.dumps(jdoc, indent=2, sort_keys=True))
    elif args.format == "dot":
        if dot_text is None:
            raise GraftInputError(
                "dot output is not available for this command")
        sys.stdout.write(dot_text)
    else:
        for line in text_lines:
            print(line)


def _set_text(vs) -> str:
    return " ".join(str(v) for v in sorted_vertices(vs))


# ---------------------------------------------------------------------------
# Subcommands.
# ---------------------------------------------------------------------------

def _cmd_analyze(args) -> int:
    g = _load_graft(args)
    F = _join_backend(g, args)
    comps = factor_components(g)
    part = kl_partition(g)
    kind = "graft"
    poset = None
    if isinstance(g, OrderedBipartiteGraft):
        kind = classify_comb(g).kind
        if kind == "comb":
            poset = cathedral_poset(g)

    lines = [f"kind: {kind}",
             f"vertices: {len(g.graph.vertices)}",
             f"edges: {len(g.graph.edges)}",
             f"terminals: {len(g.terminals)}",
             f"nu: {F.size}",
             f"join: {' '.join(sorted(F.edge_ids))}",
             f"graph components: {len(g.graph.components())}"]
    for comp in comps:
        lines.append(f"factor component {comp.id}: {_set_text(comp.vertices)}")
    for comp in comps:
        classes = kl_classes_of_component(part, comp.id)
        rendered = " ".join("{" + _set_text(cls) + "}" for cls in classes)
        lines.append(f"kl {comp.id}: {rendered}")
    if poset is not None:
        for lo, hi in poset.hasse:
            lines.append(f"poset: {lo} -> {hi}")
        for cid, h in poset.heights:
            lines.append(f"height {cid}: {h}")

    doc = {"schema": REPORT_SCHEMA,
           "kind": kind,
           "nu": F.size,
           "join": sorted(F.edge_ids),
           "graph_components": len(g.graph.components()),
           "factor_components": [{"id": c.id,
                                  "vertices": sorted_vertices(c.vertices)}
                                 for c in comps],
           "kl": [{"component": c.id,
                   "classes": [sorted_vertices(cls) for cls in
                               kl_classes_of_component(part, c.id)]}
                  for c in comps],
           "poset": poset_document(poset) if poset is not None else None,
           "graft": graft_document(g)}
    _emit(args, lines, doc, export_dot(g, join=F))
    return 0


def _cmd_min_join(args) -> int:
    g = _load_graft(args)
    F = _join_backend(g, args)
    lines = [f"size: {F.size}", f"edges: {' '.join(sorted(F.edge_ids))}"]
    doc = {"size": F.size, "edges": sorted(F.edge_ids)}
    _emit(args, lines, doc, export_dot(g, join=F))
    return 0


def _dist_value(g: Graft, args, u, v):
    if not args.oracle:
        return f_distance(g, u, v).value
    if u == v:
        return 0
    if v not in g.graph.component_of(u):
        return None
    base = min_join_bruteforce(g, max_edges=args.max_brute).size
    flipped = min_join_bruteforce(Graft(g.graph, g.terminals ^ {u, v}),
                                  max_edges=args.max_brute).size
    return flipped - base


def _cmd_dist(args) -> int:
    g = _load_graft(args)
    u = _resolve_vertex(g, args.u)
    v = _resolve_vertex(g, args.v)
    value = _dist_value(g, args, u, v)
    lines = [str(value) if value is not None else "unreachable"]
    doc = {"u": u, "v": v, "distance": value}
    _emit(args, lines, doc)
    return 0


def _cmd_components(args) -> int:
    g = _load_graft(args)
    comps = factor_components(g)
    lines = [f"{c.id}: {_set_text(c.vertices)}" for c in comps]
    doc = {"factor_components": [{"id": c.id,
                                  "vertices": sorted_vertices(c.vertices)}
                                 for c in comps]}
    _emit(args, lines, doc)
    return 0


def _cmd_kl(args) -> int:
    g = _load_graft(args)
    part = kl_partition(g)
    comps = factor_components(g)
    lines = []
    for comp in comps:
        classes = kl_classes_of_component(part, comp.id)
        rendered = " ".join("{" + _set_text(cls) + "}" for cls in classes)
        lines.append(f"{comp.id}: {rendered}")
    doc = {"kl": [{"component": c.id,
                   "classes": [sorted_vertices(cls) for cls in
                               kl_classes_of_component(part, c.id)]}
                  for c in comps]}
    _emit(args, lines, doc)
    return 0


def _cmd_classify(args) -> int:
    g = _need_bipartite(_load_graft(args))
    report = classify_comb(g)
    lines = [f"kind: {report.kind}",
             f"nu: {report.nu}",
             f"spine: {_set_text(report.spine)}",
             f"tooth: {_set_text(report.tooth)}"]
    doc = {"kind": report.kind, "nu": report.nu,
           "spine": sorted_vertices(report.spine),
           "tooth": sorted_vertices(report.tooth)}
    _emit(args, lines, doc)
    return 0


def _cmd_critical(args) -> int:
    g = _need_bipartite(_load_graft(args))
    root = _resolve_vertex(g, args.root)
    report = is_critical_quasicomb(g, root)
    lines = [f"critical: {'yes' if report.critical else 'no'}"]
    if report.table is not None:
        lines += [f"distance {v}: {d}" for v, d in report.table]
    lines += [f"problem: {p}" for p in report.problems]
    doc = {"critical": report.critical, "root": root,
           "table": ([[v, d] for v, d in report.table]
                     if report.table is not None else None),
           "problems": list(report.problems)}
    _emit(args, lines, doc)
    return 0 if report.critical else 1


def _cmd_ear_decomp(args) -> int:
    g = _need_bipartite(_load_graft(args))
    root = _resolve_vertex(g, args.root)
    F = _join_backend(g, args)
    d = build_graft_ear_decomposition(g, root, F)
    report = verify_graft_ear_decomposition(d, F)
    lines = []
    for i, step in enumerate(d.steps):
        walk = "-".join(str(v) for v in step.walk.vertices)
        lines.append(f"step {i}: {step.kind} {walk}")
    lines.append(f"valid: {'yes' if report.valid else 'no'}")
    lines += [f"problem: {p}" for p in report.problems]
    lines += [f"warning: {w}" for w in report.warnings]
    doc = {"decomposition": decomposition_document(d),
           "join": sorted(F.edge_ids),
           "valid": report.valid,
           "problems": list(report.problems),
           "warnings": list(report.warnings)}
    _emit(args, lines, doc, export_dot(d))
    return 0 if report.valid else 1


def _cmd_critical_sets(args) -> int:
    g = _need_bipartite(_load_graft(args))
    cid = _resolve_vertex(g, args.component)
    sets = enumerate_critical_sets(g, cid)
    lines = [_set_text(xs) for xs in sets]
    doc = {"component": cid,
           "critical_sets": [sorted_vertices(xs) for xs in sets]}
    _emit(args, lines, doc)
    return 0


def _cmd_poset(args) -> int:
    g = _need_bipartite(_load_graft(args))
    p = cathedral_poset(g)
    lines = [f"components: {' '.join(str(c) for c in p.component_ids)}"]
    for lo, hi in p.hasse:
        lines.append(f"{lo} -> {hi}")
    for cid, h in p.heights:
        lines.append(f"height {cid}: {h}")
    doc = poset_document(p)
    _emit(args, lines, doc, export_dot(p, components=factor_components(g)))
    return 0


def _cmd_upper(args) -> int:
    g = _need_bipartite(_load_graft(args))
    cid = _resolve_vertex(g, args.component)
    report = upper_bound_check(g, cid)
    lines = [f"holds: {'yes' if report.holds else 'no'}",
             f"upper: {_set_text(report.upper_vertices)}"]
    for entry in report.entries:
        witness = (_set_text(entry.witness_class)
                   if entry.witness_class is not None else "none")
        lines.append(f"piece {_set_text(entry.piece)} | "
                     f"neighborhood {_set_text(entry.neighborhood)} | "
                     f"class {witness}")
    _emit(args, lines, upper_report_document(report))
    return 0 if report.holds else 1


def _cmd_verify(args) -> int:
    selection = None
    if args.properties is not None:
        selection = [s for s in args.properties.split(",") if s]
    cfg = GenConfig(seed=args.seed)
    report = run_property_suite(args.trials, cfg, selection)
    lines = [f"{name}: {passed} passed, {failed} failed"
             for name, passed, failed in report.results]
    for cert in report.certificates:
        lines.append(f"counterexample {cert.property_name} "
                     f"(seed {cert.seed}):")
        lines += [f"  {entry}" for entry in cert.transcript]
    lines.append(f"failures: {report.failures}")
    _emit(args, lines, suite_report_document(report))
    print(f"suite wall time: {report.wall_time:.2f}s", file=sys.stderr)
    return 0 if report.ok else 1


def _cmd_gen(args) -> int:
    cfg = GenConfig(seed=args.seed,
                    vertices=(args.min_vertices, args.max_vertices),
                    edge_density=args.edge_density,
                    terminal_density=args.terminal_density,
                    budget=args.budget, mode=args.mode)
    out = generate(cfg)
    if cfg.mode == "critical-quasicomb":
        d, F = out
        doc = {"decomposition": decomposition_document(d),
               "join": sorted(F)}
        text = [json.dumps(doc, indent=2, sort_keys=True)]
        _emit(args, text, doc, export_dot(d))
        return 0
    doc = graft_document(out)
    text = [json.dumps(doc, indent=2, sort_keys=True)]
    _emit(args, text, doc, export_dot(out))
    return 0


def cli_main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        return args.handler(args)
    except (GraftInputError, GraftValidationError, PreconditionError,
            CapacityError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InternalConsistencyError as exc:
        print(f"internal check failed: {exc}", file=sys.stderr)
        return 1


def main(argv=None) -> int:
    return cli_main(argv)


if __name__ == "__main__":
    sys.exit(main())
