"""Minimum joins, the weights they induce on edges, and join-based distances.

Two independent backends compute minimum joins.  The exhaustive one scans the
whole affine solution space over GF(2) and canonicalizes ties; the polynomial
one matches terminals over the shortest-path metric and realizes the pairing
by breadth-first paths.  Their agreement is the package's root oracle.

All caches are ``functools.lru_cache`` based and therefore safe to share
across threads.
"""

from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator

from .core import (
    CapacityError,
    Graft,
    GraftInputError,
    InternalConsistencyError,
    Multigraph,
    OrderedBipartiteGraft,
    PreconditionError,
    Walk,
    is_join,
    simple_circuits,
    sorted_vertices,
)

# Test hook: multiplies the nu-difference inside f_distance.  The shipped
# orientation makes distances nonpositive inside factor components; flipping
# it must visibly break the distance-dependent property suites.
_DISTANCE_SIGN = 1


@contextmanager
def flipped_distance_sign():
    """Temporarily negate f_distance.  Only for sensitivity testing."""
    global _DISTANCE_SIGN
    _DISTANCE_SIGN = -_DISTANCE_SIGN
    try:
        yield
    finally:
        _DISTANCE_SIGN = -_DISTANCE_SIGN


@dataclass(frozen=True)
class JoinSet:
    """An edge set with odd degree exactly at the terminals of its graft."""

    graft: Graft
    edge_ids: frozenset

    def __post_init__(self):
        if not is_join(self.graft, self.edge_ids):
            raise PreconditionError(
                f"{sorted(self.edge_ids)!r} is not a join of the given graft")

    @property
    def size(self) -> int:
        return len(self.edge_ids)

    def __contains__(self, eid: str) -> bool:
        return eid in self.edge_ids

    def __iter__(self) -> Iterator[str]:
        return iter(sorted(self.edge_ids))


@dataclass(frozen=True)
class DistanceValue:
    """A join-induced distance; ``value`` is None when no join connects."""

    value: int | None

    @property
    def finite(self) -> bool:
        return self.value is not None


@dataclass(frozen=True)
class WeightedWalkReport:
    """A walk together with its F-weight and the tooth-balance flag.

    ``balanced`` records whether every counted tooth vertex touches exactly
    one walk edge belonging to F: the internal vertices for a path, every
    vertex for a circuit.  It is None when the walk was weighed without a
    bipartition in scope.
    """

    walk: Walk
    weight: int
    balanced: bool | None

    @property
    def vertices(self) -> tuple:
        return self.walk.vertices

    @property
    def edge_ids(self) -> tuple[str, ...]:
        return self.walk.edge_ids


def _edge_id_set(F) -> frozenset:
    if isinstance(F, JoinSet):
        return F.edge_ids
    return frozenset(F)


def f_weight(F, edge_ids: Iterable[str]) -> int:
    """Weight of an edge set: +1 per edge outside F, -1 per edge inside."""
    fset = _edge_id_set(F)
    w = 0
    for eid in edge_ids:
        w += -1 if eid in fset else 1
    return w


def _tooth_balance(fset: frozenset, walk: Walk, tooth: frozenset) -> bool:
    if walk.closed:
        counted = walk.vertices[:-1]
    else:
        counted = walk.vertices[1:-1]
    incident: dict = {}
    for i, eid in enumerate(walk.edge_ids):
        if eid in fset:
            for v in (walk.vertices[i], walk.vertices[i + 1]):
                incident[v] = incident.get(v, 0) + 1
    return all(incident.get(v, 0) == 1 for v in counted if v in tooth)


def walk_report(F, walk: Walk, tooth: frozenset | None = None) -> WeightedWalkReport:
    fset = _edge_id_set(F)
    balanced = None if tooth is None else _tooth_balance(fset, walk, tooth)
    return WeightedWalkReport(walk, f_weight(fset, walk.edge_ids), balanced)


# ---------------------------------------------------------------------------
# Exhaustive backend: the join space is an affine subspace over GF(2), one
# particular solution plus the cycle space.  Scanning it with a Gray code
# touches each candidate in O(1).
# ---------------------------------------------------------------------------

def _spanning_forest(graph: Multigraph):
    """Deterministic BFS forest: parent edge index per vertex, discovery order."""
    index = {e.id: i for i, e in enumerate(graph.edges)}
    parent: dict = {}
    parent_edge: dict = {}
    order: list = []
    seen: set = set()
    for root in sorted_vertices(graph.vertices):
        if root in seen:
            continue
        seen.add(root)
        parent[root] = None
        parent_edge[root] = None
        queue = [root]
        qi = 0
        while qi < len(queue):
            v = queue[qi]
            qi += 1
            order.append(v)
            for e in graph.incident(v):
                w = e.other(v)
                if w not in seen:
                    seen.add(w)
                    parent[w] = v
                    parent_edge[w] = index[e.id]
                    queue.append(w)
    return parent, parent_edge, order


def _join_space(graph: Multigraph, terminals: frozenset):
    """Particular-solution mask and cycle-space basis masks, or None masks
    when no join exists (odd terminals in some component)."""
    index = {e.id: i for i, e in enumerate(graph.edges)}
    parent, parent_edge, order = _spanning_forest(graph)

    odd = {v: v in terminals for v in graph.vertices}
    particular = 0
    for v in reversed(order):
        if odd[v]:
            if parent[v] is None:
                return None, ()
            particular |= 1 << parent_edge[v]
            odd[parent[v]] = not odd[parent[v]]

    # Path-to-root masks let fundamental circuits be built by XOR.
    to_root = {}
    for v in order:
        if parent[v] is None:
            to_root[v] = 0
        else:
            to_root[v] = to_root[parent[v]] ^ (1 << parent_edge[v])
    tree_bits = {parent_edge[v] for v in graph.vertices if parent_edge[v] is not None}
    basis = tuple((1 << index[e.id]) ^ to_root[e.u] ^ to_root[e.v]
                  for e in graph.edges if index[e.id] not in tree_bits)
    return particular, basis


def _mask_to_ids(graph: Multigraph, mask: int) -> frozenset:
    return frozenset(e.id for i, e in enumerate(graph.edges) if mask >> i & 1)


def _char_vector(mask: int, nbits: int) -> tuple:
    return tuple((mask >> i) & 1 for i in range(nbits))


def _scan_join_space(graph: Multigraph, terminals: frozenset, max_edges: int):
    """All minimum-join masks, found by Gray-code walk of the affine space."""
    if len(graph.edges) > max_edges:
        raise CapacityError(
            f"{len(graph.edges)} edges exceed the exhaustive bound {max_edges}")
    particular, basis = _join_space(graph, terminals)
    if particular is None:
        return None
    best = particular.bit_count()
    best_masks = [particular]
    cur = particular
    for i in range(1, 1 << len(basis)):
        cur ^= basis[(i & -i).bit_length() - 1]
        size = cur.bit_count()
        if size < best:
            best = size
            best_masks = [cur]
        elif size == best:
            best_masks.append(cur)
    return best_masks


def min_join_bruteforce(g: Graft, max_edges: int = 22) -> JoinSet:
    """Exhaustive minimum join; ties broken toward the lexicographically
    least characteristic vector over id-sorted edges."""
    masks = _scan_join_space(g.graph, g.terminals, max_edges)
    if masks is None:
        raise InternalConsistencyError("a valid graft must admit a join")
    nbits = len(g.graph.edges)
    winner = min(masks, key=lambda m: _char_vector(m, nbits))
    return JoinSet(g, _mask_to_ids(g.graph, winner))


def all_min_joins(g: Graft, max_edges: int = 22) -> tuple[frozenset, ...]:
    """Every minimum join, sorted by characteristic vector."""
    masks = _scan_join_space(g.graph, g.terminals, max_edges)
    if masks is None:
        raise InternalConsistencyError("a valid graft must admit a join")
    nbits = len(g.graph.edges)
    uniq = sorted(set(masks), key=lambda m: _char_vector(m, nbits))
    return tuple(_mask_to_ids(g.graph, m) for m in uniq)


# ---------------------------------------------------------------------------
# Polynomial backend: match terminals over the BFS metric, realize the pairs
# by shortest paths, and take the symmetric difference.
# ---------------------------------------------------------------------------

@lru_cache(maxsize=4096)
def _bfs_tree(graph: Multigraph, source) -> tuple[dict, dict]:
    """Distances and deterministic parent edges from ``source``."""
    dist = {source: 0}
    parent_edge: dict = {source: None}
    queue = [source]
    qi = 0
    while qi < len(queue):
        v = queue[qi]
        qi += 1
        for e in graph.incident(v):
            w = e.other(v)
            if w not in dist:
                dist[w] = dist[v] + 1
                parent_edge[w] = e
                queue.append(w)
    return dist, parent_edge


def _bfs_path_ids(graph: Multigraph, u, v) -> frozenset:
    """Edge ids of the canonical shortest u-v path (BFS parents from u)."""
    dist, parent_edge = _bfs_tree(graph, u)
    if v not in dist:
        raise InternalConsistencyError(f"{u!r} and {v!r} ended up disconnected")
    ids = []
    w = v
    while w != u:
        e = parent_edge[w]
        ids.append(e.id)
        w = e.other(w)
    return frozenset(ids)


def _pairing_dp(cost: list[list[int]]) -> list[tuple[int, int]]:
    """Minimum-weight perfect pairing of indices 0..t-1 by bitmask DP.

    dp[mask] is the best pairing cost of the indices in mask; the lowest
    set index is always paired first, which visits each pairing once.
    """
    t = len(cost)
    full = (1 << t) - 1
    INF = float("inf")
    dp = [INF] * (full + 1)
    dp[0] = 0
    for mask in range(3, full + 1):
        if mask.bit_count() % 2:
            continue
        i = (mask & -mask).bit_length() - 1
        rest = mask ^ (1 << i)
        best = INF
        for j in range(i + 1, t):
            if rest >> j & 1:
                cand = dp[rest ^ (1 << j)] + cost[i][j]
                if cand < best:
                    best = cand
        dp[mask] = best
    pairs = []
    mask = full
    while mask:
        i = (mask & -mask).bit_length() - 1
        rest = mask ^ (1 << i)
        for j in range(i + 1, t):
            if rest >> j & 1 and dp[mask] == dp[rest ^ (1 << j)] + cost[i][j]:
                pairs.append((i, j))
                mask = rest ^ (1 << j)
                break
        else:
            raise InternalConsistencyError("pairing reconstruction lost its trail")
    return pairs


_DP_TERMINAL_LIMIT = 10


def _pairing_blossom(cost: list[list[int]]) -> list[tuple[int, int]]:
    import networkx as nx

    t = len(cost)
    kg = nx.Graph()
    kg.add_nodes_from(range(t))
    for i in range(t):
        for j in range(i + 1, t):
            kg.add_edge(i, j, weight=cost[i][j])
    matching = nx.min_weight_matching(kg)
    return sorted(tuple(sorted(p)) for p in matching)


@lru_cache(maxsize=8192)
def _component_pairing(graph: Multigraph, terms: tuple) -> tuple[tuple, ...]:
    """Matched terminal pairs of one component, minimizing total distance."""
    t = len(terms)
    cost = [[0] * t for _ in range(t)]
    for i, u in enumerate(terms):
        dist, _ = _bfs_tree(graph, u)
        for j in range(i + 1, t):
            cost[i][j] = cost[j][i] = dist[terms[j]]
    if t <= _DP_TERMINAL_LIMIT:
        pairs = _pairing_dp(cost)
    else:
        pairs = _pairing_blossom(cost)
    return tuple(sorted((terms[i], terms[j]) for i, j in pairs))


def _matched_terminal_pairs(graph: Multigraph, terminals: frozenset) -> list[tuple]:
    out: list[tuple] = []
    for comp in graph.components():
        terms = tuple(sorted_vertices(comp & terminals))
        if len(terms) % 2:
            raise PreconditionError(
                f"component {sorted_vertices(comp)!r} holds an odd number of terminals")
        if terms:
            out.extend(_component_pairing(graph, terms))
    return out


@lru_cache(maxsize=16384)
def _nu(graph: Multigraph, terminals: frozenset) -> int:
    total = 0
    for u, v in _matched_terminal_pairs(graph, terminals):
        dist, _ = _bfs_tree(graph, u)
        total += dist[v]
    return total


def nu(g: Graft) -> int:
    """Size of a minimum join."""
    return _nu(g.graph, g.terminals)


def min_join(g: Graft) -> JoinSet:
    """A minimum join from the matching backend.

    Deterministic, but not canonicalized across the tie set; use the
    exhaustive backend when the canonical representative matters.
    """
    F: frozenset = frozenset()
    weight = 0
    for u, v in _matched_terminal_pairs(g.graph, g.terminals):
        dist, _ = _bfs_tree(g.graph, u)
        weight += dist[v]
        F ^= _bfs_path_ids(g.graph, u, v)
    if len(F) != weight:
        raise InternalConsistencyError(
            "realized paths overlapped; matching weight must equal join size")
    return JoinSet(g, F)


def is_minimum_join(g: Graft, F) -> bool:
    """True when the join F has minimum cardinality."""
    js = F if isinstance(F, JoinSet) else JoinSet(g, frozenset(F))
    return js.size == _nu(g.graph, g.terminals)


def negative_circuit_witness(g: Graft, F, max_edges: int | None = None) -> WeightedWalkReport | None:
    """A negative-F-weight circuit, or None when no circuit within the edge
    bound is negative.  A witness certifies that F is not minimum; with no
    bound, None certifies minimality.  Exponential; keep instances small."""
    fset = _edge_id_set(F)
    tooth = g.tooth if isinstance(g, OrderedBipartiteGraft) else None
    for circuit in simple_circuits(g.graph, max_edges=max_edges):
        w = f_weight(fset, circuit.edge_ids)
        if w < 0:
            return walk_report(fset, circuit, tooth)
    return None


# ---------------------------------------------------------------------------
# Distances induced by minimum joins.
# ---------------------------------------------------------------------------

def f_distance(g: Graft, u, v) -> DistanceValue:
    """Change in minimum-join size when the terminal status of u, v flips.

    Vertices in different components are unreachable (value None): flipping
    them strands odd terminal counts on both sides.
    """
    for w in (u, v):
        if w not in g.graph.vertices:
            raise GraftInputError(f"unknown vertex id {w!r}")
    if u == v:
        return DistanceValue(0)
    if v not in g.graph.component_of(u):
        return DistanceValue(None)
    delta = _nu(g.graph, g.terminals ^ {u, v}) - _nu(g.graph, g.terminals)
    return DistanceValue(_DISTANCE_SIGN * delta)


def f_distance_int(g: Graft, u, v) -> int:
    """f_distance for pairs known to share a component."""
    d = f_distance(g, u, v)
    if not d.finite:
        raise PreconditionError(f"{u!r} and {v!r} lie in different components")
    return d.value


def extract_shortest_path(g: Graft, F, u, v) -> WeightedWalkReport:
    """A simple u-v path whose F-weight equals f_distance(g, u, v).

    The symmetric difference of F with a minimum join of the flipped graft
    splits into one u-v path plus zero-weight circuits, so a depth-first
    search inside that difference finds a path of exactly the right weight.
    """
    fset = _edge_id_set(F)
    if not is_minimum_join(g, F):
        raise PreconditionError("F must be a minimum join")
    tooth = g.tooth if isinstance(g, OrderedBipartiteGraft) else None
    if u == v:
        return walk_report(fset, Walk((u,), ()), tooth)
    d = f_distance(g, u, v)
    if not d.finite:
        raise PreconditionError(f"{u!r} and {v!r} lie in different components")
    flipped = Graft(g.graph, g.terminals ^ {u, v})
    fprime = min_join(flipped).edge_ids
    diff = fset ^ fprime
    path = _dfs_path_within(g.graph, diff, u, v)
    if path is None:
        raise InternalConsistencyError(
            "the join difference must connect the flipped pair")
    report = walk_report(fset, path, tooth)
    if report.weight != d.value:
        raise InternalConsistencyError(
            f"extracted path weighs {report.weight}, distance says {d.value}")
    return report


def _dfs_path_within(graph: Multigraph, allowed: frozenset, u, v) -> Walk | None:
    """Deterministic DFS for a simple u-v path using only ``allowed`` edges."""
    stack = [(u, None)]
    parent: dict = {}
    seen = {u}
    while stack:
        w, via = stack.pop()
        if via is not None:
            parent[w] = via
        if w == v:
            ids = []
            vs = [v]
            x = v
            while x != u:
                e = parent[x]
                ids.append(e.id)
                x = e.other(x)
                vs.append(x)
            return Walk(tuple(reversed(vs)), tuple(reversed(ids)))
        for e in reversed(graph.incident(w)):
            if e.id in allowed:
                nxt = e.other(w)
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append((nxt, e))
    return None


def is_allowed_edge(g: Graft, eid: str) -> bool:
    """True when some minimum join contains the edge.

    Joins through e of size nu correspond to joins of the residual graft
    (G - e, T flipped at e's ends) of size nu - 1; when that residual has a
    component with odd terminals, no such join exists at all.
    """
    e = g.graph.edge(eid)
    residual = g.graph.without_edges([eid])
    flipped = g.terminals ^ {e.u, e.v}
    for comp in residual.components():
        if len(comp & flipped) % 2:
            return False
    return 1 + _nu(residual, flipped) == _nu(g.graph, g.terminals)
