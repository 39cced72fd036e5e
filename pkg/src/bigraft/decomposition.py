"""Factor components and the distance-zero partition refining them.

An edge is allowed when some minimum join contains it.  Components of the
allowed subgraph cut a graft into the pieces that exchange minimum-join
structure; inside each piece, distance zero is an equivalence whose classes
this module computes and audits.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

from .core import (
    Graft,
    GraftInputError,
    InternalConsistencyError,
    Multigraph,
    sorted_vertices,
    vertex_key,
)
from .joins import f_distance_int, is_allowed_edge


@lru_cache(maxsize=4096)
def _allowed_edge_set(graph: Multigraph, terminals: frozenset) -> frozenset:
    g = Graft(graph, terminals)
    return frozenset(e.id for e in graph.edges if is_allowed_edge(g, e.id))


def allowed_edge_set(g: Graft) -> frozenset:
    """Ids of every edge contained in at least one minimum join."""
    return _allowed_edge_set(g.graph, g.terminals)


@dataclass(frozen=True)
class FactorComponent:
    """One component of the allowed subgraph.

    ``id`` is the least vertex id inside, ``subgraph`` keeps only the
    allowed edges.
    """

    id: object
    vertices: frozenset
    subgraph: Multigraph

    def __post_init__(self):
        if self.id != sorted_vertices(self.vertices)[0]:
            raise InternalConsistencyError(
                f"component id {self.id!r} is not its least vertex")


@dataclass(frozen=True)
class FactorComponentSet:
    """All factor components of a graft, sorted by component id."""

    components: tuple[FactorComponent, ...]

    def __post_init__(self):
        ids = [c.id for c in self.components]
        if ids != sorted(ids, key=vertex_key):
            raise InternalConsistencyError("components are not sorted by id")
        seen: set = set()
        for c in self.components:
            if seen & c.vertices:
                raise InternalConsistencyError("components overlap")
            seen |= c.vertices

    def ids(self) -> tuple:
        return tuple(c.id for c in self.components)

    def by_id(self, cid) -> FactorComponent:
        for c in self.components:
            if c.id == cid:
                return c
        raise GraftInputError(f"unknown factor-component id {cid!r}")

    def component_of(self, v) -> FactorComponent:
        for c in self.components:
            if v in c.vertices:
                return c
        raise GraftInputError(f"unknown vertex id {v!r}")

    def vertex_sets(self) -> tuple[frozenset, ...]:
        return tuple(c.vertices for c in self.components)

    def __len__(self) -> int:
        return len(self.components)

    def __iter__(self):
        return iter(self.components)


@lru_cache(maxsize=2048)
def _factor_components(graph: Multigraph, terminals: frozenset) -> FactorComponentSet:
    allowed = _allowed_edge_set(graph, terminals)
    skeleton = Multigraph(graph.vertices,
                          tuple(e for e in graph.edges if e.id in allowed))
    comps = []
    for vs in skeleton.components():
        least = sorted_vertices(vs)[0]
        comps.append(FactorComponent(least, vs, skeleton.induced(vs)))
    comps.sort(key=lambda c: vertex_key(c.id))
    out = FactorComponentSet(tuple(comps))
    covered = frozenset().union(*out.vertex_sets()) if comps else frozenset()
    if covered != graph.vertices:
        raise InternalConsistencyError("factor components do not cover V")
    return out


def factor_components(g: Graft) -> FactorComponentSet:
    """Components of the allowed subgraph; isolated vertices are singletons."""
    return _factor_components(g.graph, g.terminals)


def is_separating(g: Graft, X: Iterable) -> tuple[bool, tuple]:
    """Whether X is a union of factor-component vertex sets.

    Returns (True, ids of the components whose union is X) or
    (False, ids of the components X cuts).
    """
    xs = frozenset(X)
    stray = xs - g.graph.vertices
    if stray:
        raise GraftInputError(f"unknown vertex ids {sorted_vertices(stray)!r}")
    comps = factor_components(g)
    inside = []
    cut = []
    for c in comps:
        if c.vertices <= xs:
            inside.append(c.id)
        elif c.vertices & xs:
            cut.append(c.id)
    if cut:
        return False, tuple(cut)
    return True, tuple(inside)


@dataclass(frozen=True)
class KLPartition:
    """Distance-zero classes within each factor component.

    ``classes`` holds disjoint vertex sets covering V; a class id is its
    least vertex.  ``component_ids`` aligns with ``classes``: entry i names
    the factor component whose vertices class i refines.
    """

    classes: tuple[frozenset, ...]
    component_ids: tuple

    def __post_init__(self):
        if len(self.classes) != len(self.component_ids):
            raise InternalConsistencyError("class/component alignment broken")
        lookup: dict = {}
        for cls, cid in zip(self.classes, self.component_ids):
            if not cls:
                raise InternalConsistencyError("empty class")
            for v in cls:
                if v in lookup:
                    raise InternalConsistencyError("classes overlap")
                lookup[v] = (sorted_vertices(cls)[0], cid)
        object.__setattr__(self, "_lookup", lookup)

    def class_id_of(self, v):
        try:
            return self._lookup[v][0]
        except KeyError:
            raise GraftInputError(f"unknown vertex id {v!r}") from None

    def class_of(self, v) -> frozenset:
        cid = self.class_id_of(v)
        for cls in self.classes:
            if cid in cls:
                return cls
        raise InternalConsistencyError("lookup desynchronized")

    def component_id_of(self, v):
        try:
            return self._lookup[v][1]
        except KeyError:
            raise GraftInputError(f"unknown vertex id {v!r}") from None

    def same_class(self, u, v) -> bool:
        return self.class_id_of(u) == self.class_id_of(v)

    def as_sets(self) -> tuple[frozenset, ...]:
        return self.classes


def kl_partition(g: Graft) -> KLPartition:
    """Group vertices by distance zero inside their factor component.

    Every instance is audited pairwise: same class must coincide with
    distance zero, which in particular certifies transitivity.  An audit
    failure raises InternalConsistencyError.
    """
    comps = factor_components(g)
    classes: list[frozenset] = []
    component_ids: list = []
    for comp in comps:
        local: list[list] = []
        for v in sorted_vertices(comp.vertices):
            for members in local:
                if f_distance_int(g, v, members[0]) == 0:
                    members.append(v)
                    break
            else:
                local.append([v])
        for members in local:
            classes.append(frozenset(members))
            component_ids.append(comp.id)
        _audit_component(g, comp, local)
    return KLPartition(tuple(classes), tuple(component_ids))


def _audit_component(g: Graft, comp: FactorComponent, local: list[list]) -> None:
    rep = {v: members[0] for members in local for v in members}
    vs = sorted_vertices(comp.vertices)
    for i, u in enumerate(vs):
        for v in vs[i + 1:]:
            same = rep[u] == rep[v]
            zero = f_distance_int(g, u, v) == 0
            if same != zero:
                raise InternalConsistencyError(
                    f"distance-zero relation is not an equivalence at "
                    f"({u!r}, {v!r}) in component {comp.id!r}")


def kl_classes_of_component(part: KLPartition, cid) -> tuple[frozenset, ...]:
    """The classes refining one factor component."""
    out = tuple(cls for cls, owner in zip(part.classes, part.component_ids)
                if owner == cid)
    if not out:
        raise GraftInputError(f"unknown factor-component id {cid!r}")
    return out
