"""Seeded random instances: grafts, combs, and ear-grown critical quasicombs.

All sampling runs on ``random.Random`` (Mersenne Twister) seeded explicitly,
so a config reproduces its instances byte for byte on any platform.  Combs
come out of rejection sampling against ``is_minimum_join``; critical
quasicombs are grown forward by composing random proper ear steps, which by
the characterization theorem cannot produce anything else.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .combs import EarStep, GraftEarDecomposition, validate_ear_step
from .core import (
    CapacityError,
    Graft,
    GraftInputError,
    InternalConsistencyError,
    Multigraph,
    OrderedBipartiteGraft,
    Walk,
    graft_sum,
    sorted_vertices,
)
from .joins import is_minimum_join

_MODES = ("graft", "comb", "critical-quasicomb")


@dataclass(frozen=True)
class GenConfig:
    """Knobs for the random generators.

    ``vertices`` is an inclusive count range, the densities are per-slot
    probabilities in [0, 1], and ``budget`` bounds rejection loops.
    """

    seed: int = 0
    vertices: tuple[int, int] = (4, 10)
    edge_density: float = 0.35
    terminal_density: float = 0.5
    budget: int = 300
    mode: str = "graft"

    def __post_init__(self):
        lo, hi = self.vertices
        if lo < 1 or hi < lo:
            raise GraftInputError(f"empty vertex-count range {self.vertices!r}")
        for label, value in (("edge", self.edge_density),
                             ("terminal", self.terminal_density)):
            if not 0.0 <= value <= 1.0:
                raise GraftInputError(f"{label} density {value!r} is not in [0, 1]")
        if self.budget < 1:
            raise GraftInputError("the retry budget must be at least 1")
        if self.mode not in _MODES:
            raise GraftInputError(f"unknown generator mode {self.mode!r}")

    def rng(self) -> random.Random:
        return random.Random(self.seed)


def _sample_edges(rng: random.Random, pairs, density: float, start: int = 0):
    """One coin per vertex pair, plus a rarer coin for a parallel twin."""
    edges = []
    counter = itertools.count(start)
    for u, v in pairs:
        if rng.random() < density:
            edges.append((f"e{next(counter)}", u, v))
            if rng.random() < density / 3:
                edges.append((f"e{next(counter)}", u, v))
    return edges


def gen_random_graft(cfg: GenConfig, rng: random.Random | None = None) -> Graft:
    """A random multigraph graft with the terminal parity repaired.

    Terminals are sampled per vertex; any component left with an odd count
    has its least vertex toggled, which restores parity without touching
    the rest of the sample.
    """
    rng = rng or cfg.rng()
    n = rng.randint(*cfg.vertices)
    names = [f"v{i}" for i in range(n)]
    pairs = [(names[i], names[j]) for i in range(n) for j in range(i + 1, n)]
    graph = Multigraph.build(names, _sample_edges(rng, pairs, cfg.edge_density))
    terminals = {v for v in names if rng.random() < cfg.terminal_density}
    for comp in graph.components():
        if len(terminals & comp) % 2:
            terminals ^= {sorted_vertices(comp)[0]}
    return Graft(graph, frozenset(terminals))


def gen_random_comb(cfg: GenConfig,
                    rng: random.Random | None = None) -> OrderedBipartiteGraft:
    """Rejection-sample a comb.

    Each attempt draws a bipartite graph, gives every tooth vertex one
    incident join edge, and declares the terminals to be the tooth side
    plus the spine vertices of odd join degree.  The sample is kept only if
    that edge set is confirmed to be a minimum join, which pins the join
    size to the tooth count.
    """
    rng = rng or cfg.rng()
    for _ in range(cfg.budget):
        n = max(2, rng.randint(*cfg.vertices))
        a_count = rng.randint(1, n - 1)
        spine = [f"a{i}" for i in range(a_count)]
        tooth = [f"b{i}" for i in range(n - a_count)]
        edges = _sample_edges(rng, [(a, b) for a in spine for b in tooth],
                              cfg.edge_density)
        counter = itertools.count(len(edges))
        owned: dict = {b: [] for b in tooth}
        for eid, _, b in edges:
            owned[b].append(eid)
        for b in tooth:
            if not owned[b]:
                eid = f"e{next(counter)}"
                edges.append((eid, spine[rng.randrange(a_count)], b))
                owned[b].append(eid)
        fset = frozenset(rng.choice(owned[b]) for b in tooth)
        graph = Multigraph.build(spine + tooth, edges)
        odd_spine = {a for a in spine
                     if sum(e.id in fset for e in graph.incident(a)) % 2}
        g = OrderedBipartiteGraft(graph, frozenset(tooth) | odd_spine,
                                  frozenset(spine), frozenset(tooth))
        if is_minimum_join(g, fset):
            return g
    raise CapacityError(
        f"comb sampling accepted 0 of {cfg.budget} attempts")


# ---------------------------------------------------------------------------
# Ear-step composition.
# ---------------------------------------------------------------------------

_KINDS = ("straight", "round", "circuit")
_KIND_WEIGHTS = (0.45, 0.35, 0.2)


def _pick_bond(rng: random.Random, base: OrderedBipartiteGraft):
    return rng.choice(sorted_vertices(base.graph.vertices))


def _side_run(base: OrderedBipartiteGraft, anchor, length: int,
              fresh) -> tuple[list, set]:
    """New vertices walking away from ``anchor``, alternating sides.

    Returns them ordered from the far end toward the anchor, together with
    the set of those that landed on the tooth side.
    """
    anchor_spine = anchor in base.spine
    run: list = []
    toothy: set = set()
    for back in range(1, length + 1):
        on_spine = anchor_spine == (back % 2 == 0)
        name = f"a{next(fresh)}" if on_spine else f"b{next(fresh)}"
        if not on_spine:
            toothy.add(name)
        run.insert(0, name)
    return run, toothy


def _choose_join_edges(rng: random.Random, vs: tuple, eids: tuple,
                       new_tooth: set, forced: dict) -> frozenset:
    """Give every new tooth vertex exactly one incident walk edge.

    ``forced`` maps a vertex to the edge position it must (True) or must
    not (False) select; unconstrained interior vertices choose at random.
    """
    incident: dict = {}
    for i, eid in enumerate(eids):
        for v in (vs[i], vs[i + 1]):
            if v in new_tooth:
                incident.setdefault(v, []).append(i)
    picked = set()
    for v in sorted(incident):
        slots = incident[v]
        want, position = forced.get(v, (None, None))
        if want is True:
            choice = position
        elif want is False:
            others = [i for i in slots if i != position]
            choice = others[0] if len(others) == 1 else rng.choice(others)
        elif len(slots) == 1:
            choice = slots[0]
        else:
            choice = rng.choice(slots)
        picked.add(eids[choice])
    return frozenset(picked)


def _step_terminals(vs: tuple, eids: tuple, fpart: frozenset) -> frozenset:
    odd: set = set()
    for i, eid in enumerate(eids):
        if eid in fpart:
            odd ^= {vs[i], vs[i + 1]}
    return frozenset(odd)


def _assemble_step(base: OrderedBipartiteGraft, vs: tuple, eids: tuple,
                   bonds: tuple, new_tooth: set,
                   fpart: frozenset) -> tuple[EarStep, frozenset]:
    vset = frozenset(vs)
    spine = (vset & base.spine) | (vset - new_tooth - base.graph.vertices)
    tooth = (vset & base.tooth) | frozenset(new_tooth)
    step = EarStep(Walk(vs, eids), bonds, _step_terminals(vs, eids, fpart),
                   spine, tooth)
    ok, violations = validate_ear_step(base, step)
    if not ok:
        raise InternalConsistencyError(
            "the step sampler produced an invalid ear: "
            + "; ".join(v.message for v in violations))
    return step, fpart


def _straight_step(rng: random.Random, base: OrderedBipartiteGraft, fresh):
    bond = _pick_bond(rng, base)
    run, toothy = _side_run(base, bond, rng.randint(1, 3), fresh)
    vs = tuple(run) + (bond,)
    eids = tuple(f"e{next(fresh)}" for _ in range(len(vs) - 1))
    forced: dict = {}
    if vs[0] not in toothy and len(vs) > 2 and vs[1] in toothy:
        forced[vs[1]] = (False, 0)
    if bond in base.spine and vs[-2] in toothy:
        forced[vs[-2]] = (True, len(eids) - 1)
    fpart = _choose_join_edges(rng, vs, eids, toothy, forced)
    return _assemble_step(base, vs, eids, (bond,), toothy, fpart)


def _round_step(rng: random.Random, base: OrderedBipartiteGraft, fresh):
    s, t = rng.sample(sorted_vertices(base.graph.vertices), 2)
    same_side = (s in base.spine) == (t in base.spine)
    inner = rng.choice((1, 3)) if same_side else rng.choice((0, 2))
    run, toothy = _side_run(base, t, inner, fresh)
    vs = (s,) + tuple(run) + (t,)
    eids = tuple(f"e{next(fresh)}" for _ in range(len(vs) - 1))
    fpart = _choose_join_edges(rng, vs, eids, toothy, {})
    return _assemble_step(base, vs, eids, (s, t), toothy, fpart)


def _circuit_step(rng: random.Random, base: OrderedBipartiteGraft, fresh):
    bond = _pick_bond(rng, base)
    run, toothy = _side_run(base, bond, rng.choice((1, 3)), fresh)
    vs = (bond,) + tuple(run) + (bond,)
    eids = tuple(f"e{next(fresh)}" for _ in range(len(vs) - 1))
    fpart = _choose_join_edges(rng, vs, eids, toothy, {})
    return _assemble_step(base, vs, eids, (bond,), toothy, fpart)


def random_ear_step(rng: random.Random, base: OrderedBipartiteGraft,
                    fresh) -> tuple[EarStep, frozenset]:
    """One random proper ear step against ``base``.

    ``fresh`` is an iterator of unused integer suffixes shared across steps.
    Every new tooth vertex selects exactly one of its walk edges into the
    join share; straight ears respect the free-end and bond placement rules,
    so the returned step passes validation with no advisory findings.
    Returns the step together with its join share.
    """
    kind = rng.choices(_KINDS, weights=_KIND_WEIGHTS)[0]
    if kind == "round" and len(base.graph.vertices) < 2:
        kind = rng.choice(("straight", "circuit"))
    if kind == "straight":
        return _straight_step(rng, base, fresh)
    if kind == "round":
        return _round_step(rng, base, fresh)
    return _circuit_step(rng, base, fresh)


def gen_random_critical_quasicomb(
        cfg: GenConfig, rng: random.Random | None = None,
        root="r") -> tuple[GraftEarDecomposition, frozenset]:
    """Grow a critical quasicomb from a bare root by random ear steps.

    Returns the recorded decomposition and the accumulated join, which is
    minimum for the target by the per-tooth ownership bound.
    """
    rng = rng or cfg.rng()
    goal = rng.randint(*cfg.vertices)
    fresh = itertools.count(1)
    current = OrderedBipartiteGraft(Multigraph(frozenset({root}), ()),
                                    frozenset(), frozenset(),
                                    frozenset({root}))
    steps: list[EarStep] = []
    fset: set = set()
    while len(current.graph.vertices) < goal or not steps:
        if len(steps) >= cfg.budget:
            break
        step, share = random_ear_step(rng, current, fresh)
        current = graft_sum(current, step.as_graft())
        steps.append(step)
        fset |= share
    return GraftEarDecomposition(root, tuple(steps), current), frozenset(fset)


def generate(cfg: GenConfig, rng: random.Random | None = None):
    """Dispatch on ``cfg.mode``; the common entry point for the CLI."""
    if cfg.mode == "graft":
        return gen_random_graft(cfg, rng)
    if cfg.mode == "comb":
        return gen_random_comb(cfg, rng)
    return gen_random_critical_quasicomb(cfg, rng)
