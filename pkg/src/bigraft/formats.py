"""JSON and DOT interchange.

The JSON side parses and emits the graft document schema and serializes
decompositions, posets, and reports; the DOT side renders grafts (with an
optional join styled), ear decompositions, and component posets.  All
output is deterministic: sorted ids, fixed key order, no timestamps.
"""

from __future__ import annotations

import json

from .cathedral import CathedralPoset, UpperBoundReport
from .combs import GraftEarDecomposition
from .core import (
    Graft,
    GraftInputError,
    Multigraph,
    OrderedBipartiteGraft,
    sorted_vertices,
)

REPORT_SCHEMA = "bigraft-report/1"

_TOP_FIELDS = ("vertices", "edges", "terminals", "bipartition")


def _fail(path: str, message: str):
    raise GraftInputError(f"{path}: {message}")


def _id_ok(value) -> bool:
    return isinstance(value, (str, int)) and not isinstance(value, bool)


def _read_id_list(doc, field, known=None, prefix="$") -> list:
    items = doc.get(field)
    if not isinstance(items, list):
        _fail(f"{prefix}.{field}", "expected a list")
    seen = set()
    for i, v in enumerate(items):
        if not _id_ok(v):
            _fail(f"{prefix}.{field}[{i}]", "ids are strings or integers")
        if v in seen:
            _fail(f"{prefix}.{field}[{i}]", f"duplicate id {v!r}")
        if known is not None and v not in known:
            _fail(f"{prefix}.{field}[{i}]", f"unknown vertex {v!r}")
        seen.add(v)
    return items


def graft_from_document(doc) -> Graft | OrderedBipartiteGraft:
    """Build a graft from a parsed JSON document, diagnosing by field path."""
    if not isinstance(doc, dict):
        _fail("$", "expected an object")
    unknown = set(doc) - set(_TOP_FIELDS)
    if unknown:
        _fail("$", f"unknown fields {sorted(map(str, unknown))!r}")
    for field in ("vertices", "edges", "terminals"):
        if field not in doc:
            _fail("$", f"missing field {field!r}")

    vertices = _read_id_list(doc, "vertices")
    known = set(vertices)

    raw_edges = doc["edges"]
    if not isinstance(raw_edges, list):
        _fail("$.edges", "expected a list")
    edges = []
    edge_ids = set()
    for i, entry in enumerate(raw_edges):
        path = f"$.edges[{i}]"
        if not isinstance(entry, dict):
            _fail(path, "expected an object")
        if set(entry) != {"id", "u", "v"}:
            _fail(path, "expected exactly the fields id, u, v")
        eid = entry["id"]
        if not isinstance(eid, str) or not eid:
            _fail(f"{path}.id", "edge ids are nonempty strings")
        if eid in edge_ids:
            _fail(f"{path}.id", f"duplicate edge id {eid!r}")
        edge_ids.add(eid)
        for end in ("u", "v"):
            if not _id_ok(entry[end]) or entry[end] not in known:
                _fail(f"{path}.{end}", f"unknown vertex {entry[end]!r}")
        if entry["u"] == entry["v"]:
            _fail(path, f"self-loop at {entry['u']!r}")
        edges.append((eid, entry["u"], entry["v"]))

    terminals = _read_id_list(doc, "terminals", known)
    graph = Multigraph.build(vertices, edges)

    if "bipartition" not in doc:
        return Graft(graph, frozenset(terminals))
    sides = doc["bipartition"]
    if not isinstance(sides, dict) or set(sides) != {"A", "B"}:
        _fail("$.bipartition", "expected exactly the fields A and B")
    spine = _read_id_list(sides, "A", known, prefix="$.bipartition")
    tooth = _read_id_list(sides, "B", known, prefix="$.bipartition")
    if set(spine) & set(tooth):
        _fail("$.bipartition", "the sides overlap")
    if set(spine) | set(tooth) != known:
        _fail("$.bipartition", "the sides do not cover the vertices")
    return OrderedBipartiteGraft(graph, frozenset(terminals),
                                 frozenset(spine), frozenset(tooth))


def parse_graft_json(text: str) -> Graft | OrderedBipartiteGraft:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraftInputError(
            f"not valid JSON (line {exc.lineno}, column {exc.colno}): {exc.msg}"
        ) from exc
    return graft_from_document(doc)


def graft_document(g: Graft) -> dict:
    doc = {
        "vertices": sorted_vertices(g.graph.vertices),
        "edges": [{"id": e.id, "u": e.u, "v": e.v} for e in g.graph.edges],
        "terminals": sorted_vertices(g.terminals),
    }
    if isinstance(g, OrderedBipartiteGraft):
        doc["bipartition"] = {"A": sorted_vertices(g.spine),
                              "B": sorted_vertices(g.tooth)}
    return doc


def _dumps(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def serialize_graft(g: Graft) -> str:
    return _dumps(graft_document(g))


def decomposition_document(d: GraftEarDecomposition) -> dict:
    return {
        "root": d.root,
        "steps": [{
            "kind": step.kind,
            "vertices": list(step.walk.vertices),
            "edges": list(step.walk.edge_ids),
            "bonds": list(step.bonds),
            "terminals": sorted_vertices(step.terminals),
            "spine": sorted_vertices(step.spine),
            "tooth": sorted_vertices(step.tooth),
        } for step in d.steps],
        "target": graft_document(d.target),
    }


def serialize_decomposition(d: GraftEarDecomposition) -> str:
    return _dumps(decomposition_document(d))


def poset_document(p: CathedralPoset) -> dict:
    return {
        "components": list(p.component_ids),
        "relation": [list(row) for row in p.relation],
        "hasse": [list(pair) for pair in p.hasse],
        "heights": [[cid, h] for cid, h in p.heights],
    }


def upper_report_document(rep: UpperBoundReport) -> dict:
    return {
        "component": rep.component_id,
        "upper": sorted_vertices(rep.upper_vertices),
        "holds": rep.holds,
        "entries": [{
            "piece": list(e.piece),
            "neighborhood": list(e.neighborhood),
            "witness_class": (sorted_vertices(e.witness_class)
                              if e.witness_class is not None else None),
            "ok": e.ok,
        } for e in rep.entries],
    }


# ---------------------------------------------------------------------------
# DOT rendering.
# ---------------------------------------------------------------------------

def _quote(value) -> str:
    return '"' + str(value).replace("\\", "\\\\").replace('"', '\\"') + '"'


def _node_attrs(g: Graft, v) -> str:
    attrs = []
    if isinstance(g, OrderedBipartiteGraft):
        attrs.append("shape=box" if v in g.tooth else "shape=ellipse")
    if v in g.terminals:
        attrs.append("peripheries=2")
    return f" [{', '.join(attrs)}]" if attrs else ""


def _graft_dot(g: Graft, join) -> str:
    fset = frozenset(join) if join is not None else frozenset()
    lines = ["graph bigraft {"]
    for v in sorted_vertices(g.graph.vertices):
        lines.append(f"  {_quote(v)}{_node_attrs(g, v)};")
    for e in g.graph.edges:
        attrs = [f"label={_quote(e.id)}"]
        if e.id in fset:
            attrs.append("style=bold")
            attrs.append("penwidth=2.2")
        lines.append(f"  {_quote(e.u)} -- {_quote(e.v)} [{', '.join(attrs)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _label(parts) -> str:
    """A quoted DOT label; each part becomes one line of the label."""
    body = "\\n".join(str(x).replace("\\", "\\\\").replace('"', '\\"')
                      for x in parts)
    return f'"{body}"'


def _poset_dot(p: CathedralPoset, components) -> str:
    listing = {}
    if components is not None:
        for comp in components:
            inside = ", ".join(map(str, sorted_vertices(comp.vertices)))
            listing[comp.id] = "{" + inside + "}"
    lines = ["digraph comb_order {"]
    for cid in p.component_ids:
        parts = [cid] + ([listing[cid]] if cid in listing else [])
        lines.append(f"  {_quote(cid)} [label={_label(parts)}];")
    for lo, hi in p.hasse:
        lines.append(f"  {_quote(lo)} -> {_quote(hi)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _decomposition_dot(d: GraftEarDecomposition) -> str:
    target = d.target
    lines = ["graph ear_decomposition {"]
    for v in sorted_vertices(target.graph.vertices):
        lines.append(f"  {_quote(v)}{_node_attrs(target, v)};")
    for index, step in enumerate(d.steps):
        vs, eids = step.walk.vertices, step.walk.edge_ids
        for i, eid in enumerate(eids):
            label = f"{index}:{eid}"
            lines.append(
                f"  {_quote(vs[i])} -- {_quote(vs[i + 1])} [label={_quote(label)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_dot(obj, *, join=None, components=None) -> str:
    """Render a graft, an ear decomposition, or a component poset as DOT.

    ``join`` styles the given edge ids when rendering a graft;
    ``components`` adds vertex lists to poset node labels.
    """
    if isinstance(obj, CathedralPoset):
        return _poset_dot(obj, components)
    if isinstance(obj, GraftEarDecomposition):
        return _decomposition_dot(obj)
    if isinstance(obj, Graft):
        return _graft_dot(obj, join)
    raise GraftInputError(
        "dot export covers grafts, ear decompositions, and posets")
