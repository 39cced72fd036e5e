"""Multigraphs, grafts, and the structural operations that build and combine them.

A graft pairs a multigraph with a terminal vertex set whose size is even in
every connected component; an ordered bipartite graft additionally carries a
bipartition into a spine side and a tooth side.  Every value here is frozen
and hashable, so instances can be shared freely and used as cache keys.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator

VertexId = str | int


class BigraftError(Exception):
    """Base class for all library errors."""


class GraftInputError(BigraftError):
    """Malformed input: unknown ids, duplicate ids, bad document structure."""


class GraftValidationError(BigraftError):
    """A structural invariant failed; ``invariant`` names which one."""

    def __init__(self, invariant: str, message: str):
        super().__init__(message)
        self.invariant = invariant


class PreconditionError(BigraftError):
    """An operation was called outside its stated precondition."""


class CapacityError(BigraftError):
    """A configured exhaustive-search bound was exceeded."""


class InternalConsistencyError(BigraftError):
    """A theorem-backed internal check failed; report as a bug if raised."""


def vertex_key(v: VertexId):
    """Sort key giving a total order over mixed int/str vertex ids."""
    return (0, v) if isinstance(v, int) else (1, v)


def sorted_vertices(vs: Iterable[VertexId]) -> list[VertexId]:
    return sorted(vs, key=vertex_key)


@dataclass(frozen=True)
class Edge:
    """One edge of a multigraph.  Parallel edges differ only in ``id``."""

    id: str
    u: VertexId
    v: VertexId

    def other(self, w: VertexId) -> VertexId:
        if w == self.u:
            return self.v
        if w == self.v:
            return self.u
        raise GraftInputError(f"vertex {w!r} is not an end of edge {self.id!r}")

    def touches(self, w: VertexId) -> bool:
        return w == self.u or w == self.v

    def ends(self) -> frozenset:
        return frozenset((self.u, self.v))


@dataclass(frozen=True)
class Multigraph:
    """Undirected multigraph without loops.  Edges are kept sorted by id."""

    vertices: frozenset
    edges: tuple[Edge, ...]

    def __post_init__(self):
        seen: set[str] = set()
        for e in self.edges:
            if not isinstance(e.id, str):
                raise GraftInputError(f"edge id {e.id!r} must be a string")
            if e.id in seen:
                raise GraftInputError(f"duplicate edge id {e.id!r}")
            seen.add(e.id)
            if e.u not in self.vertices or e.v not in self.vertices:
                raise GraftInputError(f"edge {e.id!r} has an unknown endpoint")
            if e.u == e.v:
                raise GraftInputError(f"edge {e.id!r} is a loop")
        for v in self.vertices:
            if not isinstance(v, (str, int)) or isinstance(v, bool):
                raise GraftInputError(f"vertex id {v!r} must be str or int")
        # Canonical form: endpoint order inside an edge carries no meaning,
        # so graphs assembled along different routes compare equal.
        normal = tuple(
            e if vertex_key(e.u) <= vertex_key(e.v) else Edge(e.id, e.v, e.u)
            for e in sorted(self.edges, key=lambda e: e.id))
        object.__setattr__(self, "edges", normal)

    @classmethod
    def build(cls, vertices: Iterable[VertexId],
              edges: Iterable[Edge | tuple[str, VertexId, VertexId]]) -> Multigraph:
        made = tuple(e if isinstance(e, Edge) else Edge(*e) for e in edges)
        return cls(frozenset(vertices), made)

    def edge(self, eid: str) -> Edge:
        try:
            return _edge_map(self)[eid]
        except KeyError:
            raise GraftInputError(f"unknown edge id {eid!r}") from None

    def has_edge(self, eid: str) -> bool:
        return eid in _edge_map(self)

    def edge_ids(self) -> frozenset:
        return frozenset(_edge_map(self))

    def incident(self, v: VertexId) -> tuple[Edge, ...]:
        return _adjacency(self).get(v, ())

    def degree(self, v: VertexId) -> int:
        return len(self.incident(v))

    def components(self) -> tuple[frozenset, ...]:
        return _components(self)

    def component_of(self, v: VertexId) -> frozenset:
        for comp in _components(self):
            if v in comp:
                return comp
        raise GraftInputError(f"unknown vertex id {v!r}")

    def induced(self, X: Iterable[VertexId]) -> Multigraph:
        keep = frozenset(X)
        missing = keep - self.vertices
        if missing:
            raise GraftInputError(f"unknown vertex ids {sorted_vertices(missing)!r}")
        edges = tuple(e for e in self.edges if e.u in keep and e.v in keep)
        return Multigraph(keep, edges)

    def without_edges(self, ids: Iterable[str]) -> Multigraph:
        drop = set(ids)
        unknown = drop - set(_edge_map(self))
        if unknown:
            raise GraftInputError(f"unknown edge ids {sorted(unknown)!r}")
        return Multigraph(self.vertices, tuple(e for e in self.edges if e.id not in drop))

    def is_empty(self) -> bool:
        return not self.vertices


@lru_cache(maxsize=512)
def _edge_map(g: Multigraph) -> dict:
    return {e.id: e for e in g.edges}


@lru_cache(maxsize=512)
def _adjacency(g: Multigraph) -> dict:
    adj: dict[VertexId, list[Edge]] = {v: [] for v in g.vertices}
    for e in g.edges:
        adj[e.u].append(e)
        adj[e.v].append(e)
    return {v: tuple(sorted(adj[v], key=lambda e: e.id)) for v in g.vertices}


@lru_cache(maxsize=512)
def _components(g: Multigraph) -> tuple[frozenset, ...]:
    seen: set = set()
    out: list[frozenset] = []
    for start in sorted_vertices(g.vertices):
        if start in seen:
            continue
        comp = {start}
        queue = [start]
        while queue:
            v = queue.pop()
            for e in g.incident(v):
                w = e.other(v)
                if w not in comp:
                    comp.add(w)
                    queue.append(w)
        seen |= comp
        out.append(frozenset(comp))
    return tuple(out)


@dataclass(frozen=True)
class Graft:
    """A multigraph with an even number of terminals in every component."""

    graph: Multigraph
    terminals: frozenset

    def __post_init__(self):
        stray = self.terminals - self.graph.vertices
        if stray:
            raise GraftInputError(
                f"terminals {sorted_vertices(stray)!r} are not vertices")
        for comp in self.graph.components():
            if len(comp & self.terminals) % 2:
                raise GraftValidationError(
                    "terminal-parity",
                    f"component {sorted_vertices(comp)!r} holds an odd number of terminals")

    @property
    def vertices(self) -> frozenset:
        return self.graph.vertices

    def is_terminal(self, v: VertexId) -> bool:
        return v in self.terminals


def as_plain_graft(g: Graft) -> Graft:
    """Strip any bipartition, keeping just the graph and terminals."""
    return Graft(g.graph, g.terminals) if type(g) is not Graft else g


@dataclass(frozen=True)
class OrderedBipartiteGraft(Graft):
    """A graft whose vertices split into a spine side and a tooth side.

    Every edge runs between the two sides.  The pair (spine, tooth) is
    ordered: swapping the sides yields a different value.
    """

    spine: frozenset
    tooth: frozenset

    def __post_init__(self):
        super().__post_init__()
        overlap = self.spine & self.tooth
        if overlap:
            raise GraftValidationError(
                "bipartition-overlap",
                f"vertices {sorted_vertices(overlap)!r} appear on both sides")
        uncovered = self.graph.vertices - self.spine - self.tooth
        if uncovered:
            raise GraftValidationError(
                "bipartition-coverage",
                f"vertices {sorted_vertices(uncovered)!r} are on neither side")
        stray = (self.spine | self.tooth) - self.graph.vertices
        if stray:
            raise GraftInputError(
                f"bipartition names unknown vertices {sorted_vertices(stray)!r}")
        for e in self.graph.edges:
            if (e.u in self.spine) == (e.v in self.spine):
                raise GraftValidationError(
                    "not-bipartite",
                    f"edge {e.id!r} joins two vertices of the same side")

    def side_of(self, v: VertexId) -> str:
        if v in self.spine:
            return "spine"
        if v in self.tooth:
            return "tooth"
        raise GraftInputError(f"unknown vertex id {v!r}")


def validate_graft(graph: Multigraph, terminals: Iterable[VertexId]) -> bool:
    """True when every component of ``graph`` has an even terminal count."""
    tset = frozenset(terminals)
    stray = tset - graph.vertices
    if stray:
        raise GraftInputError(f"terminals {sorted_vertices(stray)!r} are not vertices")
    return all(len(comp & tset) % 2 == 0 for comp in graph.components())


def build_bipartite_graft(graph: Multigraph, terminals: Iterable[VertexId],
                          spine: Iterable[VertexId],
                          tooth: Iterable[VertexId]) -> OrderedBipartiteGraft:
    """Validating constructor for ordered bipartite grafts."""
    return OrderedBipartiteGraft(graph, frozenset(terminals),
                                 frozenset(spine), frozenset(tooth))


def induced_subgraft(g: OrderedBipartiteGraft, X: Iterable[VertexId],
                     separating_witness: Iterable[frozenset]) -> OrderedBipartiteGraft:
    """Restrict ``g`` to a separating vertex set ``X``.

    ``separating_witness`` lists the factor-component vertex sets of ``g``;
    ``X`` must be the union of some of them, which is what makes the
    restriction inherit minimum joins.
    """
    keep = frozenset(X)
    missing = keep - g.graph.vertices
    if missing:
        raise GraftInputError(f"unknown vertex ids {sorted_vertices(missing)!r}")
    covered: set = set()
    for comp in separating_witness:
        if comp & keep:
            if not comp <= keep:
                raise PreconditionError(
                    f"{sorted_vertices(keep)!r} cuts a factor component; not separating")
            covered |= comp
    if covered != keep:
        raise PreconditionError(
            f"{sorted_vertices(keep)!r} is not a union of factor components")
    return OrderedBipartiteGraft(g.graph.induced(keep), g.terminals & keep,
                                 g.spine & keep, g.tooth & keep)


def contract_graft(g: Graft, X: Iterable[VertexId],
                   contracted_id: VertexId | None = None) -> tuple[Graft, VertexId]:
    """Collapse ``X`` to one vertex, keeping parallel edges, dropping inner ones.

    The contracted vertex becomes a terminal exactly when ``X`` held an odd
    number of terminals, which keeps the result a graft.
    """
    keep = frozenset(X)
    if not keep:
        raise PreconditionError("cannot contract an empty vertex set")
    missing = keep - g.graph.vertices
    if missing:
        raise GraftInputError(f"unknown vertex ids {sorted_vertices(missing)!r}")
    if contracted_id is None:
        least = sorted_vertices(keep)[0]
        contracted_id = f"X#{least}"
    if contracted_id in g.graph.vertices - keep:
        raise GraftInputError(f"contracted id {contracted_id!r} is already a vertex")
    vertices = (g.graph.vertices - keep) | {contracted_id}
    edges = []
    for e in g.graph.edges:
        inside_u, inside_v = e.u in keep, e.v in keep
        if inside_u and inside_v:
            continue
        if inside_u:
            edges.append(Edge(e.id, contracted_id, e.v))
        elif inside_v:
            edges.append(Edge(e.id, e.u, contracted_id))
        else:
            edges.append(e)
    terminals = g.terminals - keep
    if len(g.terminals & keep) % 2:
        terminals |= {contracted_id}
    return Graft(Multigraph(frozenset(vertices), tuple(edges)), frozenset(terminals)), contracted_id


def graft_sum(g1: OrderedBipartiteGraft, g2: OrderedBipartiteGraft) -> OrderedBipartiteGraft:
    """Union the graphs and take the symmetric difference of the terminals.

    The two bipartitions must agree on shared vertices: no vertex may sit on
    the spine side of one operand and the tooth side of the other.
    """
    clash = (g1.spine & g2.tooth) | (g2.spine & g1.tooth)
    if clash:
        raise PreconditionError(
            f"vertices {sorted_vertices(clash)!r} change sides between the operands")
    merged: dict[str, Edge] = {e.id: e for e in g1.graph.edges}
    for e in g2.graph.edges:
        old = merged.get(e.id)
        if old is not None and old.ends() != e.ends():
            raise GraftInputError(
                f"edge id {e.id!r} appears in both operands with different ends")
        merged[e.id] = e
    graph = Multigraph(g1.graph.vertices | g2.graph.vertices, tuple(merged.values()))
    return OrderedBipartiteGraft(graph, g1.terminals ^ g2.terminals,
                                 g1.spine | g2.spine, g1.tooth | g2.tooth)


def is_join(g: Graft, F: Iterable[str]) -> bool:
    """True when the edge set has odd degree exactly at the terminals."""
    fset = frozenset(F)
    unknown = fset - g.graph.edge_ids()
    if unknown:
        raise GraftInputError(f"unknown edge ids {sorted(unknown)!r}")
    odd: set = set()
    for eid in fset:
        e = g.graph.edge(eid)
        odd ^= {e.u, e.v}
    return odd == set(g.terminals)


@dataclass(frozen=True)
class VertexSetRole:
    """A vertex subset tagged with how it is about to be used."""

    vertices: frozenset
    role: str  # "induce", "contract", or "separate"

    def __post_init__(self):
        if self.role not in ("induce", "contract", "separate"):
            raise GraftInputError(f"unknown vertex-set role {self.role!r}")

    def validate_for(self, graph: Multigraph) -> None:
        missing = self.vertices - graph.vertices
        if missing:
            raise GraftInputError(
                f"role {self.role!r} names unknown vertices {sorted_vertices(missing)!r}")


@dataclass(frozen=True)
class Walk:
    """A vertex/edge sequence; simple path, or circuit when closed."""

    vertices: tuple
    edge_ids: tuple[str, ...]

    @property
    def closed(self) -> bool:
        return len(self.vertices) > 1 and self.vertices[0] == self.vertices[-1]

    def validate(self, graph: Multigraph, require: str | None = None) -> None:
        """Check incidence and simplicity; ``require`` may pin path/circuit."""
        vs, eids = self.vertices, self.edge_ids
        if not vs or len(eids) != len(vs) - 1:
            raise GraftInputError("walk vertex/edge counts do not line up")
        for i, eid in enumerate(eids):
            e = graph.edge(eid)
            if e.ends() != frozenset((vs[i], vs[i + 1])):
                raise GraftInputError(
                    f"edge {eid!r} does not join {vs[i]!r} and {vs[i + 1]!r}")
        if len(set(eids)) != len(eids):
            raise GraftInputError("walk repeats an edge")
        if self.closed:
            if len(set(vs[:-1])) != len(vs) - 1:
                raise GraftInputError("circuit repeats a vertex")
            if len(eids) < 2:
                raise GraftInputError("a circuit needs at least two edges")
            if require == "path":
                raise PreconditionError("expected a path, got a circuit")
        else:
            if len(set(vs)) != len(vs):
                raise GraftInputError("path repeats a vertex")
            if require == "circuit":
                raise PreconditionError("expected a circuit, got a path")

    def edge_set(self) -> frozenset:
        return frozenset(self.edge_ids)


def simple_paths(graph: Multigraph, start: VertexId,
                 goal: VertexId | None = None,
                 cap: int | None = None) -> Iterator[Walk]:
    """Yield simple paths from ``start`` by depth-first search.

    With ``goal`` set, only paths ending there are yielded; otherwise every
    simple path out of ``start`` (including the trivial one) is produced.
    ``cap`` bounds the number of yielded paths; exceeding it raises
    CapacityError.
    """
    if start not in graph.vertices:
        raise GraftInputError(f"unknown vertex id {start!r}")
    if goal is not None and goal not in graph.vertices:
        raise GraftInputError(f"unknown vertex id {goal!r}")
    emitted = 0

    def emit(walk: Walk) -> Iterator[Walk]:
        nonlocal emitted
        emitted += 1
        if cap is not None and emitted > cap:
            raise CapacityError(f"more than {cap} simple paths from {start!r}")
        yield walk

    def rec(v, vs: list, eids: list, seen: set) -> Iterator[Walk]:
        if goal is None or v == goal:
            yield from emit(Walk(tuple(vs), tuple(eids)))
        if goal is not None and v == goal:
            return
        for e in graph.incident(v):
            w = e.other(v)
            if w in seen:
                continue
            vs.append(w)
            eids.append(e.id)
            seen.add(w)
            yield from rec(w, vs, eids, seen)
            seen.discard(w)
            eids.pop()
            vs.pop()

    yield from rec(start, [start], [], {start})


def simple_circuits(graph: Multigraph, max_edges: int | None = None) -> Iterator[Walk]:
    """Yield every simple circuit once, including two-edge parallel circuits."""
    seen_sets: set[frozenset] = set()
    order = {v: i for i, v in enumerate(sorted_vertices(graph.vertices))}

    def rec(root, v, vs: list, eids: list, onpath: set) -> Iterator[Walk]:
        for e in graph.incident(v):
            w = e.other(v)
            if order[w] < order[root]:
                continue
            if w == root and len(eids) >= 1 and e.id != eids[0]:
                key = frozenset(eids) | {e.id}
                if key not in seen_sets:
                    seen_sets.add(key)
                    yield Walk(tuple(vs + [w]), tuple(eids + [e.id]))
                continue
            if w in onpath:
                continue
            if max_edges is not None and len(eids) + 1 >= max_edges:
                continue
            vs.append(w)
            eids.append(e.id)
            onpath.add(w)
            yield from rec(root, w, vs, eids, onpath)
            onpath.discard(w)
            eids.pop()
            vs.pop()

    for root in sorted_vertices(graph.vertices):
        yield from rec(root, root, [root], [], {root})
