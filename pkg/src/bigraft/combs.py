"""Combs, quasicombs, criticality with respect to a root, and ear growth.

A bipartite graft is a comb when its tooth side consists of terminals and a
minimum join touches each tooth exactly once; a quasicomb relaxes that to
tooth terminals only.  A quasicomb is critical for a root r on the tooth
side when every spine vertex has join distance 1 to r and every tooth
vertex distance 0.  Critical quasicombs are exactly the grafts that grow
from a single root by ear steps, and this module both builds and checks
such decompositions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .core import (
    BigraftError,
    Edge,
    Graft,
    GraftInputError,
    GraftValidationError,
    InternalConsistencyError,
    Multigraph,
    OrderedBipartiteGraft,
    PreconditionError,
    Walk,
    graft_sum,
    sorted_vertices,
    vertex_key,
)
from .joins import (
    JoinSet,
    _edge_id_set,
    extract_shortest_path,
    f_distance,
    f_weight,
    is_minimum_join,
    min_join,
    nu,
    walk_report,
)


def _require_bipartite(g) -> OrderedBipartiteGraft:
    if not isinstance(g, OrderedBipartiteGraft):
        raise PreconditionError("an ordered bipartite graft is required")
    return g


@dataclass(frozen=True)
class CombClassification:
    """Outcome of the comb/quasicomb test: kind, sides, and join size."""

    kind: str  # "comb", "quasicomb-not-comb", or "neither"
    spine: frozenset
    tooth: frozenset
    nu: int

    @property
    def is_comb(self) -> bool:
        return self.kind == "comb"

    @property
    def is_quasicomb(self) -> bool:
        return self.kind in ("comb", "quasicomb-not-comb")


def classify_comb(g: OrderedBipartiteGraft) -> CombClassification:
    """Test the two defining size equations against the computed join size."""
    _require_bipartite(g)
    n = nu(g)
    if g.tooth <= g.terminals and n == len(g.tooth):
        kind = "comb"
    elif n == len(g.tooth & g.terminals):
        kind = "quasicomb-not-comb"
    else:
        kind = "neither"
    return CombClassification(kind, g.spine, g.tooth, n)


def is_f_balanced(g: OrderedBipartiteGraft, F, walk) -> bool:
    """Whether the counted tooth vertices each touch exactly one F-edge.

    Counted vertices: internal vertices for a path, all vertices for a
    circuit, and the internal vertex set for an EarStep.
    """
    _require_bipartite(g)
    fset = _edge_id_set(F)
    if isinstance(walk, EarStep):
        inner = set(walk.walk.vertices[1:-1]) & g.tooth
        incident: dict = {}
        vs, eids = walk.walk.vertices, walk.walk.edge_ids
        for i, eid in enumerate(eids):
            if eid in fset:
                for v in (vs[i], vs[i + 1]):
                    incident[v] = incident.get(v, 0) + 1
        return all(incident.get(v, 0) == 1 for v in inner)
    walk.validate(g.graph)
    return walk_report(fset, walk, g.tooth).balanced


def midvertex(g: OrderedBipartiteGraft, F, walk: Walk):
    """The unique tooth vertex of a weight-zero tooth-to-tooth path that
    touches no F-edge of the path; both half-paths from it are weight zero
    and balanced, which is asserted."""
    _require_bipartite(g)
    fset = _edge_id_set(F)
    walk.validate(g.graph, require="path")
    ends = (walk.vertices[0], walk.vertices[-1])
    for x in ends:
        if x not in g.tooth:
            raise PreconditionError(f"path end {x!r} is not on the tooth side")
    if f_weight(fset, walk.edge_ids) != 0:
        raise PreconditionError("the path must have F-weight zero")
    incident: dict = {v: 0 for v in walk.vertices}
    for i, eid in enumerate(walk.edge_ids):
        if eid in fset:
            incident[walk.vertices[i]] += 1
            incident[walk.vertices[i + 1]] += 1
    frees = [v for v in walk.vertices if v in g.tooth and incident[v] == 0]
    if len(frees) != 1:
        raise InternalConsistencyError(
            f"expected one F-free tooth vertex, found {frees!r}")
    z = frees[0]
    zi = walk.vertices.index(z)
    for half in (Walk(tuple(reversed(walk.vertices[:zi + 1])),
                      tuple(reversed(walk.edge_ids[:zi]))),
                 Walk(walk.vertices[zi:], walk.edge_ids[zi:])):
        report = walk_report(fset, half, g.tooth)
        if report.weight != 0 or not report.balanced:
            raise InternalConsistencyError(
                "a half-path from the midvertex is not balanced of weight zero")
    return z


# ---------------------------------------------------------------------------
# Criticality.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CriticalityReport:
    """Verdict plus, for the exact method, the full distance table to the
    root (pairs sorted by vertex)."""

    critical: bool
    root: object
    method: str
    table: tuple | None
    problems: tuple[str, ...]

    def distance(self, v):
        if self.table is None:
            raise PreconditionError("no distance table on this report")
        for w, d in self.table:
            if w == v:
                return d
        raise GraftInputError(f"unknown vertex id {v!r}")


_SEARCH_STEP_CAP = 20000


def is_critical_quasicomb(g: OrderedBipartiteGraft, r,
                          method: str = "exact") -> CriticalityReport:
    """Check distance 1 to the root from the spine side, 0 from the tooth side.

    ``method="exact"`` derives every distance from join sizes and returns
    the table.  ``method="search"`` walks balanced witness paths outward
    from the root, stops early, and falls back to the exact method when the
    instance resists bounded search; it omits the table.
    """
    _require_bipartite(g)
    if r not in g.tooth:
        raise PreconditionError(f"root {r!r} is not on the tooth side")
    cls = classify_comb(g)
    if not cls.is_quasicomb:
        raise PreconditionError("criticality is defined for quasicombs only")
    if method == "exact":
        return _critical_exact(g, r)
    if method == "search":
        report = _critical_search(g, r)
        if report is None:
            return _critical_exact(g, r)
        return report
    raise GraftInputError(f"unknown method {method!r}")


def _critical_exact(g: OrderedBipartiteGraft, r) -> CriticalityReport:
    table = []
    problems = []
    for v in sorted_vertices(g.graph.vertices):
        d = f_distance(g, v, r)
        table.append((v, d.value))
        want = 1 if v in g.spine else 0
        if d.value != want:
            shown = d.value if d.finite else "unreachable"
            problems.append(f"distance from {v!r} to the root is {shown}, expected {want}")
    return CriticalityReport(not problems, r, "exact", tuple(table), tuple(problems))


def _critical_search(g: OrderedBipartiteGraft, r) -> CriticalityReport | None:
    """Balanced-witness search; None when the step cap was exhausted."""
    targets = g.graph.vertices - {r}
    if not targets:
        return CriticalityReport(True, r, "search", None, ())
    if len(g.graph.components()) > 1:
        return CriticalityReport(False, r, "search", None,
                                 ("the graft is disconnected",))
    if r in g.terminals:
        return CriticalityReport(False, r, "search", None,
                                 ("the root is a terminal",))
    missing = (g.tooth - {r}) - g.terminals
    if missing:
        return CriticalityReport(
            False, r, "search", None,
            tuple(f"tooth vertex {v!r} is not a terminal, so its distance "
                  f"to the root is at least 2" for v in sorted_vertices(missing)))
    F = min_join(g).edge_ids
    if any(e.id in F for e in g.graph.incident(r)):
        raise InternalConsistencyError(
            "a minimum join touched the root despite the premises")
    tooth_join_edge = {}
    for eid in F:
        e = g.graph.edge(eid)
        b = e.u if e.u in g.tooth else e.v
        if b in tooth_join_edge:
            raise InternalConsistencyError(
                f"tooth vertex {b!r} touches two join edges in a quasicomb")
        tooth_join_edge[b] = e

    marked: set = set()
    budget = [_SEARCH_STEP_CAP]
    visited = {r}

    def walk_out(v, came_via_join: bool) -> bool:
        """DFS over simple balanced prefixes; True when all targets marked."""
        if budget[0] <= 0:
            return False
        if v in g.tooth and v != r and not came_via_join:
            candidates = [tooth_join_edge[v]] if v in tooth_join_edge else []
        elif v in g.tooth and v != r:
            candidates = [e for e in g.graph.incident(v) if e.id not in F]
        else:
            candidates = list(g.graph.incident(v))
        for e in candidates:
            w = e.other(v)
            if w in visited:
                continue
            budget[0] -= 1
            if budget[0] <= 0:
                return False
            via_join = e.id in F
            if w in g.spine or via_join:
                marked.add(w)
                if len(marked) == len(targets):
                    return True
            visited.add(w)
            if walk_out(w, via_join):
                return True
            visited.discard(w)
        return False

    done = walk_out(r, False)
    if budget[0] <= 0 and not done:
        return None
    if done or marked == targets:
        return CriticalityReport(True, r, "search", None, ())
    unmarked = sorted_vertices(targets - marked)
    problems = tuple(
        f"no balanced witness path from the root reaches {v!r}" for v in unmarked)
    return CriticalityReport(False, r, "search", None, problems)


# ---------------------------------------------------------------------------
# Ear steps.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StepViolation:
    """One failed ear-step condition; fatal ones break the decomposition,
    the rest are tolerated when the replay stays critical."""

    code: str
    message: str
    fatal: bool


@dataclass(frozen=True)
class EarStep:
    """One ear: a path or circuit walk, its bonds, and the step terminals.

    The walk is oriented: a straight ear runs from its free end to its bond,
    a round path carries a bond at each end, and a circuit starts and ends
    at its only bond.  ``spine``/``tooth`` give the sides of the walk's
    vertices and must alternate along it.
    """

    walk: Walk
    bonds: tuple
    terminals: frozenset
    spine: frozenset
    tooth: frozenset

    def __post_init__(self):
        vs = self.walk.vertices
        if len(vs) < 2:
            raise GraftInputError("an ear needs at least one edge")
        graph = self._build_graph()
        self.walk.validate(graph)
        bond_set = set(self.bonds)
        if len(bond_set) != len(self.bonds) or not 1 <= len(self.bonds) <= 2:
            raise GraftInputError("an ear has one or two distinct bonds")
        if self.walk.closed:
            if bond_set != {vs[0]}:
                raise GraftInputError("a circuit ear must start at its bond")
        elif len(self.bonds) == 2:
            if bond_set != {vs[0], vs[-1]}:
                raise GraftInputError("a round path carries its bonds at both ends")
        else:
            if bond_set != {vs[-1]}:
                raise GraftInputError("a straight ear must end at its bond")
        object.__setattr__(self, "bonds",
                           tuple(sorted(bond_set, key=vertex_key)))
        vset = set(vs)
        if self.spine | self.tooth != vset or self.spine & self.tooth:
            raise GraftValidationError(
                "bipartition-coverage", "ear sides must partition the walk vertices")
        for a, b in zip(vs, vs[1:]):
            if (a in self.spine) == (b in self.spine):
                raise GraftValidationError(
                    "not-bipartite", "consecutive ear vertices share a side")
        if not self.terminals <= vset:
            raise GraftInputError("step terminals must lie on the walk")
        if len(self.terminals) % 2:
            raise GraftValidationError(
                "terminal-parity", "a step needs an even number of terminals")

    def _build_graph(self) -> Multigraph:
        vs, eids = self.walk.vertices, self.walk.edge_ids
        edges = tuple(Edge(eid, vs[i], vs[i + 1]) for i, eid in enumerate(eids))
        return Multigraph(frozenset(vs), edges)

    @property
    def kind(self) -> str:
        if self.walk.closed or len(self.bonds) == 2:
            return "round"
        return "straight"

    @property
    def free_end(self):
        if self.kind != "straight":
            raise PreconditionError("only straight ears have a free end")
        return self.walk.vertices[0]

    @property
    def internal_vertices(self) -> frozenset:
        return frozenset(self.walk.vertices) - frozenset(self.bonds)

    @property
    def edge_ids(self) -> frozenset:
        return frozenset(self.walk.edge_ids)

    @property
    def neck_edges(self) -> frozenset:
        """Walk edges incident to a bond."""
        vs, eids = self.walk.vertices, self.walk.edge_ids
        bond_set = set(self.bonds)
        return frozenset(eid for i, eid in enumerate(eids)
                         if vs[i] in bond_set or vs[i + 1] in bond_set)

    @property
    def is_effective(self) -> bool:
        """Round ears always; straight ears per the free-end/bond rules."""
        if self.kind == "round":
            return True
        s = self.walk.vertices[0]
        t = self.walk.vertices[-1]
        if s in self.spine and s in self.terminals:
            return False
        if t in self.spine and t not in self.terminals:
            return False
        return True

    def as_graft(self) -> OrderedBipartiteGraft:
        return OrderedBipartiteGraft(self._build_graph(), self.terminals,
                                     self.spine, self.tooth)


def validate_ear_step(base: OrderedBipartiteGraft,
                      step: EarStep) -> tuple[bool, tuple[StepViolation, ...]]:
    """Check one ear step against the support it is about to extend.

    Shape, side, and edge-reuse conditions are fatal; the tooth-terminal
    placement rules and effectiveness are advisory, because replay
    criticality is the final authority on those.
    """
    _require_bipartite(base)
    out: list[StepViolation] = []

    def add(code: str, message: str, fatal: bool):
        out.append(StepViolation(code, message, fatal))

    support = base.graph.vertices
    for b in step.bonds:
        if b not in support:
            add("bond-outside-support", f"bond {b!r} is not a support vertex", True)
    for v in sorted_vertices(step.internal_vertices & support):
        add("internal-vertex-in-support",
            f"ear vertex {v!r} already belongs to the support", True)
    reused = step.edge_ids & base.graph.edge_ids()
    for eid in sorted(reused):
        add("edge-id-reused", f"edge {eid!r} already belongs to the support", True)
    side_clash = (step.spine & base.tooth) | (step.tooth & base.spine)
    for v in sorted_vertices(side_clash):
        add("side-conflict", f"vertex {v!r} changes sides", True)

    inner = set(step.walk.vertices[1:-1])
    for v in sorted_vertices((inner & step.tooth) - step.terminals):
        add("internal-tooth-not-terminal",
            f"internal tooth vertex {v!r} is not a step terminal", False)
    for b in step.bonds:
        if b in step.tooth and b in step.terminals:
            add("bond-tooth-terminal",
                f"tooth bond {b!r} must not be a step terminal", False)
    if not step.is_effective:
        add("ineffective-step",
            "a straight ear must avoid a spine free end terminal and make "
            "a spine bond terminal", False)
    return not out, tuple(out)


# ---------------------------------------------------------------------------
# Decompositions: build and verify.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GraftEarDecomposition:
    """An ordered ear growth from a single root toward a target graft."""

    root: object
    steps: tuple[EarStep, ...]
    target: OrderedBipartiteGraft

    def __post_init__(self):
        if self.root not in self.target.graph.vertices:
            raise GraftInputError(f"root {self.root!r} is not a target vertex")

    def initial(self) -> OrderedBipartiteGraft:
        return OrderedBipartiteGraft(
            Multigraph(frozenset({self.root}), ()), frozenset(),
            frozenset(), frozenset({self.root}))

    def replay(self) -> OrderedBipartiteGraft:
        g = self.initial()
        for step in self.steps:
            g = graft_sum(g, step.as_graft())
        return g

    def prefixes(self) -> Iterator[OrderedBipartiteGraft]:
        """Yield the graft after each step."""
        g = self.initial()
        for step in self.steps:
            g = graft_sum(g, step.as_graft())
            yield g


class EarExtensionError(InternalConsistencyError):
    """The builder could not extend its support; carries the stuck state."""

    def __init__(self, message: str, support: frozenset, steps: tuple):
        super().__init__(message)
        self.support = support
        self.steps = steps


def _odd_degree_vertices(edges: Iterable[Edge]) -> frozenset:
    odd: set = set()
    for e in edges:
        odd ^= {e.u, e.v}
    return frozenset(odd)


def build_graft_ear_decomposition(g: OrderedBipartiteGraft, r,
                                  F) -> GraftEarDecomposition:
    """Grow the target from its root one ear at a time.

    Steps are chosen deterministically: first any non-join edge from a new
    spine vertex into the tooth support, then any non-join edge from the
    spine support to a new tooth vertex (completed into a round ear along a
    balanced weight-zero path to the root), then join edges to new tooth
    vertices, each by least edge id; leftover support-internal edges become
    single-edge round ears.  Throughout, no join edge runs between the tooth
    support and unreached spine vertices.
    """
    _require_bipartite(g)
    fset = _edge_id_set(F)
    if not is_minimum_join(g, F):
        raise PreconditionError("F must be a minimum join of the target")
    head = is_critical_quasicomb(g, r, method="exact")
    if not head.critical:
        raise PreconditionError(
            "the target is not critical for this root: " + "; ".join(head.problems))

    spine_sup: set = set()
    tooth_sup: set = {r}
    used: set = set()
    steps: list[EarStep] = []

    def sides_of(vertices) -> tuple[frozenset, frozenset]:
        vset = frozenset(vertices)
        return vset & g.spine, vset & g.tooth

    def check_invariant():
        for eid in fset:
            e = g.graph.edge(eid)
            b = e.u if e.u in g.tooth else e.v
            a = e.other(b)
            if b in tooth_sup and a not in spine_sup:
                raise InternalConsistencyError(
                    f"join edge {eid!r} leaks from the tooth support")

    check_invariant()
    while True:
        unused = [e for e in g.graph.edges if e.id not in used]
        support = spine_sup | tooth_sup
        if not unused:
            if support != g.graph.vertices:
                raise EarExtensionError("edges ran out before the vertices",
                                        frozenset(support), tuple(steps))
            break

        step = None
        for e in unused:
            a = e.u if e.u in g.spine else e.v
            b = e.other(a)
            if b in tooth_sup and a not in spine_sup:
                if e.id in fset:
                    raise InternalConsistencyError(
                        f"join edge {e.id!r} violated the growth invariant")
                sp, to = sides_of((a, b))
                step = EarStep(Walk((a, b), (e.id,)), (b,), frozenset(), sp, to)
                spine_sup.add(a)
                break
        if step is None:
            for e in unused:
                if e.id in fset:
                    continue
                a = e.u if e.u in g.spine else e.v
                b = e.other(a)
                if a in spine_sup and b not in tooth_sup:
                    step = _round_step_via_balanced_path(
                        g, fset, e, a, b, spine_sup | tooth_sup, r)
                    for v in step.internal_vertices:
                        (spine_sup if v in g.spine else tooth_sup).add(v)
                    break
        if step is None:
            for e in unused:
                if e.id not in fset:
                    continue
                a = e.u if e.u in g.spine else e.v
                b = e.other(a)
                if a in spine_sup and b not in tooth_sup:
                    sp, to = sides_of((a, b))
                    step = EarStep(Walk((b, a), (e.id,)), (a,),
                                   frozenset({a, b}), sp, to)
                    tooth_sup.add(b)
                    break
        if step is None:
            if support != g.graph.vertices:
                raise EarExtensionError(
                    "no ear extends the support, yet vertices remain",
                    frozenset(support), tuple(steps))
            for e in unused:
                if e.id in fset:
                    raise InternalConsistencyError(
                        f"leftover edge {e.id!r} belongs to the join")
                sp, to = sides_of((e.u, e.v))
                p, q = sorted((e.u, e.v), key=vertex_key)
                steps.append(EarStep(Walk((p, q), (e.id,)), (p, q),
                                     frozenset(), sp, to))
                used.add(e.id)
            continue

        used |= step.edge_ids
        steps.append(step)
        check_invariant()

    out = GraftEarDecomposition(r, tuple(steps), g)
    if out.replay() != g:
        raise InternalConsistencyError("the built decomposition does not replay")
    return out


def _round_step_via_balanced_path(g: OrderedBipartiteGraft, fset: frozenset,
                                  f: Edge, u, v, support: set, root) -> EarStep:
    """Complete edge f=uv (u in the spine support, v a new tooth vertex)
    into a round ear along a balanced weight-zero path from v to the root,
    truncated at the first support vertex."""
    report = extract_shortest_path(g, fset, v, root)
    if report.weight != 0 or not report.balanced:
        raise InternalConsistencyError(
            "the balanced-path guarantee failed on a critical quasicomb")
    P = report.walk
    if P.edge_ids[0] not in fset:
        raise InternalConsistencyError(
            "a weight-zero path must leave its tooth end on a join edge")
    cut = next(i for i, w in enumerate(P.vertices) if w in support)
    w = P.vertices[cut]
    if w not in g.spine:
        raise InternalConsistencyError(
            "the path reentered the support on the tooth side")
    vertices = (u,) + P.vertices[:cut + 1]
    eids = (f.id,) + P.edge_ids[:cut]
    edges = [g.graph.edge(eid) for eid in eids]
    terminals = _odd_degree_vertices(e for e in edges if e.id in fset)
    walk = Walk(vertices, eids)
    bonds = (u,) if w == u else (u, w)
    vset = frozenset(vertices)
    return EarStep(walk, bonds, terminals, vset & g.spine, vset & g.tooth)


@dataclass(frozen=True)
class StepCheck:
    """Verification record for one replayed step."""

    index: int
    violations: tuple[StepViolation, ...]
    prefix_critical: bool | None
    step_join_minimum: bool | None


@dataclass(frozen=True)
class VerificationReport:
    """Replay outcome: fatal problems invalidate, warnings are tolerated."""

    valid: bool
    step_checks: tuple[StepCheck, ...]
    problems: tuple[str, ...]
    warnings: tuple[str, ...]


def verify_graft_ear_decomposition(d: GraftEarDecomposition,
                                   F=None) -> VerificationReport:
    """Replay the decomposition and judge it.

    Fatal: malformed steps, a replay that stops being a critical quasicomb
    for the root after some step, or a final graft differing from the
    target.  Tolerated with a warning: tooth-terminal placement and
    effectiveness violations, provided criticality survives.  With F given,
    each step's share of F must be a minimum join of the step graft.
    """
    problems: list[str] = []
    warnings: list[str] = []
    checks: list[StepCheck] = []
    target = d.target

    fset = None
    if F is not None:
        fset = _edge_id_set(F)
        try:
            minimum = is_minimum_join(target, fset)
        except PreconditionError:
            minimum = False
        if not minimum:
            problems.append("F is not a minimum join of the target")
            fset = None

    if d.root not in target.tooth:
        problems.append(f"root {d.root!r} is not on the target's tooth side")

    current = d.initial()
    replay_ok = True
    for idx, step in enumerate(d.steps):
        _, violations = validate_ear_step(current, step)
        fatal = [v for v in violations if v.fatal]
        prefix_critical = None
        step_join_minimum = None
        if fatal:
            problems.extend(f"step {idx}: {v.message}" for v in fatal)
            checks.append(StepCheck(idx, violations, None, None))
            replay_ok = False
            break
        try:
            current = graft_sum(current, step.as_graft())
        except BigraftError as exc:
            problems.append(f"step {idx}: replay failed: {exc}")
            checks.append(StepCheck(idx, violations, None, None))
            replay_ok = False
            break
        prefix_critical = _prefix_critical(current, d.root, idx, problems)
        if fset is not None:
            share = fset & step.edge_ids
            step_graft = step.as_graft()
            try:
                step_join_minimum = is_minimum_join(step_graft, share)
            except PreconditionError:
                step_join_minimum = False
            if not step_join_minimum:
                problems.append(
                    f"step {idx}: the join share {sorted(share)!r} is not a "
                    f"minimum join of the step")
        nonfatal = [v for v in violations if not v.fatal]
        if nonfatal:
            if prefix_critical:
                warnings.extend(
                    f"step {idx}: tolerated: {v.message}" for v in nonfatal)
            else:
                problems.extend(f"step {idx}: {v.message}" for v in nonfatal)
        checks.append(StepCheck(idx, violations, prefix_critical, step_join_minimum))

    if replay_ok and current != target:
        problems.append("the replayed graft differs from the target")

    return VerificationReport(not problems, tuple(checks),
                              tuple(problems), tuple(warnings))


def _prefix_critical(current: OrderedBipartiteGraft, root, idx: int,
                     problems: list) -> bool:
    try:
        report = is_critical_quasicomb(current, root, method="exact")
    except PreconditionError as exc:
        problems.append(f"step {idx}: replayed prefix is not checkable: {exc}")
        return False
    if not report.critical:
        problems.append(
            f"step {idx}: the replayed prefix is not critical: "
            + "; ".join(report.problems))
    return report.critical
