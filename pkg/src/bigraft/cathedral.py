"""Critical sets and the order they induce on a comb's factor components.

A critical set for a factor component G0 is a separating set X containing
V(G0) whose contraction of G0 to a single tooth vertex is a critical
quasicomb.  Component G1 precedes G2 when some critical set for G1 swallows
all of G2; this relation is a partial order, computed here together with
its Hasse diagram, heights, and the neighborhood containment check for the
vertices lying strictly above a component.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .core import (
    CapacityError,
    GraftInputError,
    InternalConsistencyError,
    Multigraph,
    OrderedBipartiteGraft,
    PreconditionError,
    Walk,
    contract_graft,
    induced_subgraft,
    sorted_vertices,
)
from .combs import EarStep, classify_comb, is_critical_quasicomb, is_f_balanced
from .decomposition import (
    factor_components,
    is_separating,
    kl_classes_of_component,
    kl_partition,
)
from .joins import _edge_id_set, f_distance_int


_DEFAULT_COMPONENT_LIMIT = 12


def _require_comb(g) -> OrderedBipartiteGraft:
    if not isinstance(g, OrderedBipartiteGraft) or not classify_comb(g).is_comb:
        raise PreconditionError("a comb is required")
    return g


@dataclass(frozen=True)
class CriticalSetCertificate:
    """Witness that X is a critical set for the component ``component_id``.

    The contraction collapses the component to ``contracted_vertex`` on the
    tooth side; ``table`` is its distance table to that root (1 on the
    spine, 0 on the tooth).
    """

    component_id: object
    vertices: frozenset
    witness_ids: tuple
    contraction: OrderedBipartiteGraft
    contracted_vertex: object
    table: tuple


def _contracted_name(base_id, taken: frozenset) -> str:
    name = "g0"
    while name in taken:
        name = f"g0#{base_id}" if name == "g0" else name + "#"
    return name


def is_critical_set(comb: OrderedBipartiteGraft, component_id, X,
                    method: str = "exact") -> tuple[bool, CriticalSetCertificate | None]:
    """Decide whether X is a critical set for the given factor component.

    X must be separating and contain the component; contracting the
    component to a fresh tooth vertex must leave a bipartite graft that is
    a critical quasicomb for that vertex.  Returns the verdict and, when
    true, a certificate carrying the contraction and its distance table.
    """
    _require_comb(comb)
    comps = factor_components(comb)
    g0 = comps.by_id(component_id)
    xs = frozenset(X)
    separating, ids = is_separating(comb, xs)
    if not separating:
        return False, None
    if not g0.vertices <= xs:
        return False, None

    outside_tooth = (comb.tooth & xs) - g0.vertices
    for v in g0.vertices & comb.spine:
        for e in comb.graph.incident(v):
            if e.other(v) in outside_tooth:
                # The contraction would put this edge between two tooth
                # vertices, so it cannot be a bipartite quasicomb.
                return False, None

    inner = induced_subgraft(comb, xs,
                             tuple(comps.by_id(cid).vertices for cid in ids))
    name = _contracted_name(component_id, xs)
    contracted, root = contract_graft(inner, g0.vertices, contracted_id=name)
    if root in contracted.terminals:
        raise InternalConsistencyError(
            f"factor component {component_id!r} holds an odd number of terminals")
    shape = OrderedBipartiteGraft(
        contracted.graph, contracted.terminals,
        (comb.spine & xs) - g0.vertices, outside_tooth | {root})
    try:
        report = is_critical_quasicomb(shape, root, method=method)
    except PreconditionError as exc:
        raise InternalConsistencyError(
            f"the contraction of a comb stopped being a quasicomb: {exc}") from exc
    if not report.critical:
        return False, None
    if report.table is None:
        confirm = is_critical_quasicomb(shape, root, method="exact")
        if not confirm.critical:
            raise InternalConsistencyError(
                "search accepted a contraction the exact method rejects")
        report = confirm
    return True, CriticalSetCertificate(component_id, xs, ids, shape, root,
                                        report.table)


def enumerate_critical_sets(comb: OrderedBipartiteGraft, component_id,
                            max_components: int = _DEFAULT_COMPONENT_LIMIT
                            ) -> tuple[frozenset, ...]:
    """All critical sets for the component, smallest first.

    Candidates are the unions of factor components that include the base
    one, so the search is exponential in the component count; instances
    beyond ``max_components`` components are refused.
    """
    _require_comb(comb)
    comps = factor_components(comb)
    if len(comps) > max_components:
        raise CapacityError(
            f"{len(comps)} factor components exceed the limit of {max_components}")
    g0 = comps.by_id(component_id)
    others = [c for c in comps if c.id != g0.id]
    found: list[frozenset] = []
    for size in range(len(others) + 1):
        for chosen in itertools.combinations(others, size):
            xs = g0.vertices.union(*(c.vertices for c in chosen)) \
                if chosen else g0.vertices
            ok, _ = is_critical_set(comb, component_id, xs, method="search")
            if ok:
                found.append(xs)
    return tuple(found)


def precedes(comb: OrderedBipartiteGraft, first_id, second_id,
             max_components: int = _DEFAULT_COMPONENT_LIMIT) -> bool:
    """Whether some critical set for the first component covers the second."""
    comps = factor_components(comb)
    target = comps.by_id(second_id).vertices
    return any(target <= xs
               for xs in enumerate_critical_sets(comb, first_id,
                                                 max_components=max_components))


@dataclass(frozen=True)
class CathedralPoset:
    """The critical-set order over factor components.

    ``relation[i][j]`` says component i precedes component j, indices
    following ``component_ids``.  ``hasse`` lists the covering pairs and
    ``heights`` the longest-chain height of each component, minimal
    elements at height 1.
    """

    component_ids: tuple
    relation: tuple[tuple[bool, ...], ...]
    hasse: tuple[tuple[object, object], ...]
    heights: tuple[tuple[object, int], ...]

    def _index(self, cid) -> int:
        try:
            return self.component_ids.index(cid)
        except ValueError:
            raise GraftInputError(f"unknown factor-component id {cid!r}") from None

    def precedes(self, first_id, second_id) -> bool:
        return self.relation[self._index(first_id)][self._index(second_id)]

    def height_of(self, cid) -> int:
        self._index(cid)
        return dict(self.heights)[cid]

    def minimal_ids(self) -> tuple:
        return tuple(cid for cid, h in self.heights if h == 1)


def cathedral_poset(comb: OrderedBipartiteGraft,
                    max_components: int = _DEFAULT_COMPONENT_LIMIT) -> CathedralPoset:
    """Compute the full order, check its axioms, and lay out the diagram.

    Any antisymmetry or transitivity failure is raised as an internal
    consistency error, since the theory guarantees both.
    """
    _require_comb(comb)
    comps = factor_components(comb)
    ids = comps.ids()
    sets = {cid: enumerate_critical_sets(comb, cid, max_components=max_components)
            for cid in ids}
    vertices = {c.id: c.vertices for c in comps}
    n = len(ids)
    rel = [[any(vertices[b] <= xs for xs in sets[a]) for b in ids] for a in ids]

    for i in range(n):
        if not rel[i][i]:
            raise InternalConsistencyError(
                f"component {ids[i]!r} does not precede itself")
        for j in range(n):
            if i != j and rel[i][j] and rel[j][i]:
                raise InternalConsistencyError(
                    f"components {ids[i]!r} and {ids[j]!r} precede each other")
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if rel[i][j] and rel[j][k] and not rel[i][k]:
                    raise InternalConsistencyError(
                        f"precedence is not transitive at "
                        f"({ids[i]!r}, {ids[j]!r}, {ids[k]!r})")

    hasse = []
    for i in range(n):
        for j in range(n):
            if i == j or not rel[i][j]:
                continue
            covered = any(rel[i][k] and rel[k][j]
                          for k in range(n) if k not in (i, j))
            if not covered:
                hasse.append((ids[i], ids[j]))

    heights: dict = {}
    remaining = set(range(n))
    while remaining:
        progressed = False
        for j in sorted(remaining):
            below = [i for i in range(n) if i != j and rel[i][j]]
            if all(ids[i] in heights for i in below):
                heights[ids[j]] = 1 + max(
                    (heights[ids[i]] for i in below), default=0)
                remaining.discard(j)
                progressed = True
        if not progressed:
            raise InternalConsistencyError("height assignment cycled")

    return CathedralPoset(ids, tuple(tuple(row) for row in rel),
                          tuple(sorted(hasse)),
                          tuple((cid, heights[cid]) for cid in ids))


def union_criticality_check(comb: OrderedBipartiteGraft, first_id, second_id,
                            third_id, X, Y) -> bool:
    """Check that chained critical sets compose: X for G1 covering G2 and Y
    for G2 covering G3 should make X ∪ Y critical for G1 and cover G3."""
    _require_comb(comb)
    comps = factor_components(comb)
    second = comps.by_id(second_id).vertices
    third = comps.by_id(third_id).vertices
    xs, ys = frozenset(X), frozenset(Y)
    ok_x, _ = is_critical_set(comb, first_id, xs)
    if not ok_x:
        raise PreconditionError(f"X is not a critical set for {first_id!r}")
    if not second <= xs:
        raise PreconditionError(f"X does not cover component {second_id!r}")
    ok_y, _ = is_critical_set(comb, second_id, ys)
    if not ok_y:
        raise PreconditionError(f"Y is not a critical set for {second_id!r}")
    if not third <= ys:
        raise PreconditionError(f"Y does not cover component {third_id!r}")
    union_ok, _ = is_critical_set(comb, first_id, xs | ys)
    return union_ok and third <= (xs | ys)


@dataclass(frozen=True)
class UpperBoundEntry:
    """One connected piece above the component, its neighborhood inside the
    component, and the tooth class containing that neighborhood (None when
    no class works, or when the neighborhood is empty)."""

    piece: tuple
    neighborhood: tuple
    witness_class: frozenset | None

    @property
    def ok(self) -> bool:
        return not self.neighborhood or self.witness_class is not None


@dataclass(frozen=True)
class UpperBoundReport:
    """Containment check for the vertices strictly above a component."""

    component_id: object
    upper_vertices: frozenset
    entries: tuple[UpperBoundEntry, ...]
    holds: bool


def upper_bound_check(comb: OrderedBipartiteGraft, component_id,
                      max_components: int = _DEFAULT_COMPONENT_LIMIT
                      ) -> UpperBoundReport:
    """Verify that everything strictly above the component attaches to it
    through a single tooth class.

    The upper set is the union of the components strictly preceding from
    ``component_id``; each connected piece of it must have its neighborhood
    inside the component contained in one tooth-side distance class.
    """
    _require_comb(comb)
    comps = factor_components(comb)
    g0 = comps.by_id(component_id)
    sets = enumerate_critical_sets(comb, component_id,
                                   max_components=max_components)
    upper: set = set()
    for comp in comps:
        if comp.id == g0.id:
            continue
        if any(comp.vertices <= xs for xs in sets):
            upper |= comp.vertices

    classes = [cls for cls in kl_classes_of_component(kl_partition(comb), g0.id)
               if cls <= comb.tooth]
    classes.sort(key=lambda cls: sorted_vertices(cls)[0])

    entries = []
    if upper:
        for piece in comb.graph.induced(frozenset(upper)).components():
            near: set = set()
            for v in piece:
                for e in comb.graph.incident(v):
                    w = e.other(v)
                    if w in g0.vertices:
                        near.add(w)
            witness = None
            for cls in classes:
                if near <= cls:
                    witness = cls
                    break
            entries.append(UpperBoundEntry(tuple(sorted_vertices(piece)),
                                           tuple(sorted_vertices(near)),
                                           witness))
    report = UpperBoundReport(component_id, frozenset(upper), tuple(entries),
                              all(e.ok for e in entries))
    return report


def round_ear_bond_check(comb: OrderedBipartiteGraft, F, component_id,
                         P) -> bool:
    """For a balanced round ear hanging off a factor component, confirm its
    bonds sit on the tooth side of the component at distance zero.

    P may be an EarStep or a Walk (bonds then taken from its ends).  The
    ear must be round, balanced for F, bonded inside the component, and
    internally disjoint from it.
    """
    _require_comb(comb)
    comps = factor_components(comb)
    home = comps.by_id(component_id)
    fset = _edge_id_set(F)
    if isinstance(P, Walk):
        P.validate(comb.graph)
        bonds = (P.vertices[0],) if P.closed else (P.vertices[0], P.vertices[-1])
        vset = frozenset(P.vertices)
        step = EarStep(P, bonds, frozenset(), vset & comb.spine,
                       vset & comb.tooth)
    elif isinstance(P, EarStep):
        step = P
    else:
        raise PreconditionError("P must be an EarStep or a Walk")
    if step.kind != "round":
        raise PreconditionError("only round ears are covered by this check")
    if not frozenset(step.bonds) <= home.vertices:
        raise PreconditionError("the ear must bond inside the component")
    if step.internal_vertices & home.vertices:
        raise PreconditionError(
            "the ear must be internally disjoint from the component")
    if not is_f_balanced(comb, fset, step):
        raise PreconditionError("the ear is not balanced for F")
    if not frozenset(step.bonds) <= comb.tooth:
        return False
    if len(step.bonds) == 2:
        s, t = step.bonds
        return f_distance_int(comb, s, t) == 0
    return True
