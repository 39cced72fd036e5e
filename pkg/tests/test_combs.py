"""Comb classification, criticality, ear steps, and decompositions."""

import pytest

from bigraft.core import (
    GraftInputError,
    GraftValidationError,
    InternalConsistencyError,
    Multigraph,
    OrderedBipartiteGraft,
    PreconditionError,
    Walk,
)
from bigraft.combs import (
    CombClassification,
    EarStep,
    GraftEarDecomposition,
    StepViolation,
    build_graft_ear_decomposition,
    classify_comb,
    is_critical_quasicomb,
    is_f_balanced,
    midvertex,
    validate_ear_step,
    verify_graft_ear_decomposition,
)
from bigraft.instances import c4, chain4, k2, p3r
from bigraft.joins import f_distance_int, min_join, walk_report
from bigraft.core import Graft


def obg(vertices, edges, terminals, spine, tooth):
    return OrderedBipartiteGraft(Multigraph.build(vertices, edges),
                                 frozenset(terminals), frozenset(spine),
                                 frozenset(tooth))


def square():
    """A four-cycle hung on the root: r-a1-b1-a2-r, join edge a1-b1."""
    return obg(["r", "a1", "b1", "a2"],
               [("c1", "r", "a1"), ("e1", "a1", "b1"),
                ("c2", "b1", "a2"), ("c3", "a2", "r")],
               {"a1", "b1"}, {"a1", "a2"}, {"r", "b1"})


def parallel_pair():
    """Root plus a parallel pair: two a1-b1 edges, one of them join."""
    return obg(["r", "a1", "b1"],
               [("c", "r", "a1"), ("d", "a1", "b1"), ("e", "a1", "b1")],
               {"a1", "b1"}, {"a1"}, {"r", "b1"})


def outward_stub():
    """Quasicomb whose tooth vertex pairs away from the root; not critical."""
    return obg(["r", "a1", "b1", "a2"],
               [("c1", "r", "a1"), ("c2", "a1", "b1"), ("e1", "b1", "a2")],
               {"a2", "b1"}, {"a1", "a2"}, {"r", "b1"})


def singleton(v="r"):
    return obg([v], [], set(), set(), {v})


class TestClassify:
    def test_reference_kinds(self):
        assert classify_comb(k2()).kind == "comb"
        assert classify_comb(c4()).kind == "comb"
        assert classify_comb(chain4()).kind == "comb"
        assert classify_comb(p3r()).kind == "quasicomb-not-comb"

    def test_neither(self):
        base = c4()
        swapped = OrderedBipartiteGraft(base.graph, frozenset({"v1", "v3"}),
                                        frozenset({"v1", "v3"}),
                                        frozenset({"v2", "v4"}))
        cls = classify_comb(swapped)
        assert cls.kind == "neither"
        assert not cls.is_quasicomb

    def test_fields(self):
        cls = classify_comb(p3r())
        assert cls == CombClassification("quasicomb-not-comb",
                                         frozenset({"a1"}),
                                         frozenset({"r", "b1"}), 1)
        assert cls.is_quasicomb and not cls.is_comb
        assert classify_comb(k2()).is_comb

    def test_requires_bipartite(self):
        g = k2()
        with pytest.raises(PreconditionError):
            classify_comb(Graft(g.graph, g.terminals))


class TestBalanced:
    def test_c4_circuit_both_joins(self):
        g = c4()
        circuit = Walk(("v1", "v2", "v3", "v4", "v1"), ("f1", "f2", "f3", "f4"))
        assert is_f_balanced(g, {"f1", "f4"}, circuit)
        assert is_f_balanced(g, {"f2", "f3"}, circuit)

    def test_tooth_vertex_with_two_edges(self):
        g = c4()
        path = Walk(("v3", "v4", "v1"), ("f3", "f4"))
        assert not is_f_balanced(g, {"f3", "f4"}, path)

    def test_spine_vertices_unconstrained(self):
        g = chain4()
        path = Walk(("b0", "a1", "b1"), ("c", "e1"))
        assert is_f_balanced(g, {"e0", "e1"}, path)

    def test_ear_counts_internal_vertices_only(self):
        g = parallel_pair()
        ear = EarStep(Walk(("a1", "b1", "a1"), ("e", "d")), ("a1",),
                      frozenset({"a1", "b1"}), frozenset({"a1"}),
                      frozenset({"b1"}))
        assert is_f_balanced(g, {"d"}, ear)
        assert not is_f_balanced(g, frozenset(), ear)

    def test_ear_free_tooth_end_not_counted(self):
        g = p3r()
        ear = EarStep(Walk(("b1", "a1"), ("e1",)), ("a1",),
                      frozenset({"a1", "b1"}), frozenset({"a1"}),
                      frozenset({"b1"}))
        assert is_f_balanced(g, frozenset(), ear)


class TestMidvertex:
    def test_p3r(self):
        g = p3r()
        assert midvertex(g, {"e1"}, Walk(("b1", "a1", "r"), ("e1", "c"))) == "r"

    def test_chain4(self):
        g = chain4()
        walk = Walk(("b0", "a1", "b1"), ("c", "e1"))
        assert midvertex(g, {"e0", "e1"}, walk) == "b0"

    def test_end_must_be_tooth(self):
        g = chain4()
        with pytest.raises(PreconditionError):
            midvertex(g, {"e0", "e1"}, Walk(("a0", "b0"), ("e0",)))

    def test_weight_must_be_zero(self):
        g = chain4()
        with pytest.raises(PreconditionError):
            midvertex(g, {"e0", "e1"}, Walk(("b0", "a0"), ("e0",)))

    def test_circuit_rejected(self):
        g = c4()
        circuit = Walk(("v2", "v3", "v4", "v1", "v2"), ("f2", "f3", "f4", "f1"))
        with pytest.raises(PreconditionError):
            midvertex(g, {"f2", "f3"}, circuit)

    def test_nonunique_raises(self):
        g = obg(["b1", "a1", "b2", "a2", "b3"],
                [("e1", "b1", "a1"), ("c1", "a1", "b2"),
                 ("c2", "b2", "a2"), ("e2", "a2", "b3")],
                {"a1", "a2"}, {"a1", "a2"}, {"b1", "b2", "b3"})
        walk = Walk(("b1", "a1", "b2", "a2", "b3"), ("e1", "c1", "c2", "e2"))
        with pytest.raises(InternalConsistencyError):
            midvertex(g, {"c1", "c2"}, walk)

    def test_chain_of_two_joins(self):
        g = obg(["b1", "a1", "b2", "a2", "b3"],
                [("e1", "b1", "a1"), ("c1", "a1", "b2"),
                 ("c2", "b2", "a2"), ("e2", "a2", "b3")],
                {"a1", "b1", "a2", "b3"}, {"a1", "a2"}, {"b1", "b2", "b3"})
        walk = Walk(("b1", "a1", "b2", "a2", "b3"), ("e1", "c1", "c2", "e2"))
        assert midvertex(g, {"e1", "e2"}, walk) == "b2"


class TestCriticality:
    def test_p3r_exact(self):
        rep = is_critical_quasicomb(p3r(), "r")
        assert rep.critical
        assert rep.method == "exact"
        assert rep.table == (("a1", 1), ("b1", 0), ("r", 0))
        assert rep.distance("a1") == 1
        assert rep.problems == ()

    def test_p3r_search(self):
        rep = is_critical_quasicomb(p3r(), "r", method="search")
        assert rep.critical
        assert rep.method == "search"
        assert rep.table is None
        with pytest.raises(PreconditionError):
            rep.distance("a1")

    def test_singleton(self):
        g = singleton()
        assert is_critical_quasicomb(g, "r").critical
        assert is_critical_quasicomb(g, "r", method="search").critical

    def test_k2_root_is_terminal(self):
        rep = is_critical_quasicomb(k2(), "b")
        assert not rep.critical
        assert rep.distance("a") == -1
        search = is_critical_quasicomb(k2(), "b", method="search")
        assert not search.critical
        assert any("terminal" in p for p in search.problems)

    def test_square_and_parallel(self):
        for g in (square(), parallel_pair()):
            assert is_critical_quasicomb(g, "r").critical
            assert is_critical_quasicomb(g, "r", method="search").critical

    def test_outward_stub_not_critical(self):
        exact = is_critical_quasicomb(outward_stub(), "r")
        assert not exact.critical
        assert exact.distance("b1") == 2
        search = is_critical_quasicomb(outward_stub(), "r", method="search")
        assert not search.critical
        assert any("b1" in p for p in search.problems)

    def test_tooth_not_terminal_premise(self):
        g = obg(["r", "a1", "b1"], [("c", "r", "a1"), ("d", "a1", "b1")],
                set(), {"a1"}, {"r", "b1"})
        assert not is_critical_quasicomb(g, "r").critical
        search = is_critical_quasicomb(g, "r", method="search")
        assert not search.critical
        assert any("b1" in p for p in search.problems)

    def test_disconnected(self):
        g = obg(["r", "a1", "b1", "b2"],
                [("c", "r", "a1"), ("e1", "a1", "b1")],
                {"a1", "b1"}, {"a1"}, {"r", "b1", "b2"})
        assert not is_critical_quasicomb(g, "r").critical
        search = is_critical_quasicomb(g, "r", method="search")
        assert not search.critical

    def test_root_must_be_tooth(self):
        with pytest.raises(PreconditionError):
            is_critical_quasicomb(p3r(), "a1")

    def test_non_quasicomb_rejected(self):
        base = c4()
        swapped = OrderedBipartiteGraft(base.graph, frozenset({"v1", "v3"}),
                                        frozenset({"v1", "v3"}),
                                        frozenset({"v2", "v4"}))
        with pytest.raises(PreconditionError):
            is_critical_quasicomb(swapped, "v2")

    def test_unknown_method(self):
        with pytest.raises(GraftInputError):
            is_critical_quasicomb(p3r(), "r", method="guess")

    def test_unknown_vertex_in_table(self):
        rep = is_critical_quasicomb(p3r(), "r")
        with pytest.raises(GraftInputError):
            rep.distance("zz")

    def test_search_matches_exact_on_examples(self):
        cases = [(p3r(), "r"), (square(), "r"), (parallel_pair(), "r"),
                 (outward_stub(), "r"), (k2(), "b"), (chain4(), "b0"),
                 (chain4(), "b1"), (c4(), "v2"), (c4(), "v4")]
        for g, root in cases:
            exact = is_critical_quasicomb(g, root).critical
            search = is_critical_quasicomb(g, root, method="search").critical
            assert search == exact


class TestEarStep:
    def test_straight(self):
        step = EarStep(Walk(("a1", "r"), ("c",)), ("r",), frozenset(),
                       frozenset({"a1"}), frozenset({"r"}))
        assert step.kind == "straight"
        assert step.free_end == "a1"
        assert step.internal_vertices == frozenset({"a1"})
        assert step.neck_edges == frozenset({"c"})
        assert step.is_effective
        g = step.as_graft()
        assert g.terminals == frozenset()
        assert g.tooth == frozenset({"r"})

    def test_round_path(self):
        step = EarStep(Walk(("a2", "b1", "a1"), ("c2", "e1")), ("a1", "a2"),
                       frozenset({"a1", "b1"}), frozenset({"a1", "a2"}),
                       frozenset({"b1"}))
        assert step.kind == "round"
        assert step.bonds == ("a1", "a2")
        assert step.internal_vertices == frozenset({"b1"})
        assert step.neck_edges == frozenset({"c2", "e1"})
        with pytest.raises(PreconditionError):
            step.free_end

    def test_circuit(self):
        step = EarStep(Walk(("a1", "b1", "a1"), ("e", "d")), ("a1",),
                       frozenset({"a1", "b1"}), frozenset({"a1"}),
                       frozenset({"b1"}))
        assert step.kind == "round"
        assert step.walk.closed
        assert step.internal_vertices == frozenset({"b1"})

    def test_needs_an_edge(self):
        with pytest.raises(GraftInputError):
            EarStep(Walk(("r",), ()), ("r",), frozenset(), frozenset(),
                    frozenset({"r"}))

    def test_straight_bond_must_be_last(self):
        with pytest.raises(GraftInputError):
            EarStep(Walk(("a1", "r"), ("c",)), ("a1",), frozenset(),
                    frozenset({"a1"}), frozenset({"r"}))

    def test_round_bonds_at_both_ends(self):
        with pytest.raises(GraftInputError):
            EarStep(Walk(("a2", "b1", "a1"), ("c2", "e1")), ("a2", "b1"),
                    frozenset({"a1", "b1"}), frozenset({"a1", "a2"}),
                    frozenset({"b1"}))

    def test_sides_must_alternate(self):
        with pytest.raises(GraftValidationError):
            EarStep(Walk(("a1", "r"), ("c",)), ("r",), frozenset(),
                    frozenset(), frozenset({"a1", "r"}))

    def test_sides_must_cover(self):
        with pytest.raises(GraftValidationError):
            EarStep(Walk(("a1", "r"), ("c",)), ("r",), frozenset(),
                    frozenset(), frozenset({"r"}))

    def test_terminal_parity(self):
        with pytest.raises(GraftValidationError):
            EarStep(Walk(("a1", "r"), ("c",)), ("r",), frozenset({"a1"}),
                    frozenset({"a1"}), frozenset({"r"}))

    def test_terminals_on_walk(self):
        with pytest.raises(GraftInputError):
            EarStep(Walk(("a1", "r"), ("c",)), ("r",),
                    frozenset({"a1", "zz"}), frozenset({"a1"}),
                    frozenset({"r"}))

    def test_effectiveness(self):
        ineffective = EarStep(Walk(("a1", "r"), ("c",)), ("r",),
                              frozenset({"a1", "r"}), frozenset({"a1"}),
                              frozenset({"r"}))
        assert not ineffective.is_effective
        spine_bond = EarStep(Walk(("b1", "a1"), ("e1",)), ("a1",),
                             frozenset(), frozenset({"a1"}),
                             frozenset({"b1"}))
        assert not spine_bond.is_effective
        good = EarStep(Walk(("b1", "a1"), ("e1",)), ("a1",),
                       frozenset({"a1", "b1"}), frozenset({"a1"}),
                       frozenset({"b1"}))
        assert good.is_effective


class TestValidateEarStep:
    def test_clean_first_step(self):
        base = singleton()
        step = EarStep(Walk(("a1", "r"), ("c",)), ("r",), frozenset(),
                       frozenset({"a1"}), frozenset({"r"}))
        ok, violations = validate_ear_step(base, step)
        assert ok and violations == ()

    def test_bond_outside_support(self):
        base = singleton()
        step = EarStep(Walk(("b1", "a1"), ("e1",)), ("a1",),
                       frozenset({"a1", "b1"}), frozenset({"a1"}),
                       frozenset({"b1"}))
        ok, violations = validate_ear_step(base, step)
        assert not ok
        assert any(v.code == "bond-outside-support" and v.fatal
                   for v in violations)

    def test_internal_vertex_in_support(self):
        base = p3r()
        step = EarStep(Walk(("a1", "r"), ("c9",)), ("r",), frozenset(),
                       frozenset({"a1"}), frozenset({"r"}))
        ok, violations = validate_ear_step(base, step)
        assert any(v.code == "internal-vertex-in-support" and v.fatal
                   for v in violations)

    def test_edge_id_reused(self):
        base = p3r()
        step = EarStep(Walk(("a2", "r"), ("c",)), ("r",), frozenset(),
                       frozenset({"a2"}), frozenset({"r"}))
        ok, violations = validate_ear_step(base, step)
        assert any(v.code == "edge-id-reused" and v.fatal for v in violations)

    def test_side_conflict(self):
        base = singleton()
        step = EarStep(Walk(("r", "x1"), ("c",)), ("x1",), frozenset(),
                       frozenset({"r"}), frozenset({"x1"}))
        ok, violations = validate_ear_step(base, step)
        assert any(v.code == "side-conflict" and v.fatal for v in violations)

    def test_internal_tooth_not_terminal(self):
        base = obg(["r", "a1", "a2"], [("c1", "r", "a1"), ("c3", "a2", "r")],
                   set(), {"a1", "a2"}, {"r"})
        step = EarStep(Walk(("a2", "b1", "a1"), ("c2", "e1")), ("a1", "a2"),
                       frozenset(), frozenset({"a1", "a2"}),
                       frozenset({"b1"}))
        ok, violations = validate_ear_step(base, step)
        assert not ok
        offence = [v for v in violations
                   if v.code == "internal-tooth-not-terminal"]
        assert offence and not offence[0].fatal

    def test_bond_tooth_terminal(self):
        base = singleton()
        step = EarStep(Walk(("a1", "r"), ("c",)), ("r",),
                       frozenset({"a1", "r"}), frozenset({"a1"}),
                       frozenset({"r"}))
        ok, violations = validate_ear_step(base, step)
        codes = {v.code for v in violations}
        assert "bond-tooth-terminal" in codes
        assert all(not v.fatal for v in violations)

    def test_ineffective_straight(self):
        base = obg(["r", "a1"], [("c", "r", "a1")], set(), {"a1"}, {"r"})
        step = EarStep(Walk(("b1", "a1"), ("e1",)), ("a1",), frozenset(),
                       frozenset({"a1"}), frozenset({"b1"}))
        ok, violations = validate_ear_step(base, step)
        assert any(v.code == "ineffective-step" and not v.fatal
                   for v in violations)


class TestBuilder:
    def test_p3r_steps(self):
        g = p3r()
        d = build_graft_ear_decomposition(g, "r", min_join(g))
        assert len(d.steps) == 2
        first, second = d.steps
        assert first.walk == Walk(("a1", "r"), ("c",))
        assert first.bonds == ("r",) and first.terminals == frozenset()
        assert second.walk == Walk(("b1", "a1"), ("e1",))
        assert second.bonds == ("a1",)
        assert second.terminals == frozenset({"a1", "b1"})
        assert d.replay() == g

    def test_square_round_ear(self):
        g = square()
        d = build_graft_ear_decomposition(g, "r", min_join(g))
        kinds = [s.kind for s in d.steps]
        assert kinds == ["straight", "straight", "round"]
        last = d.steps[-1]
        assert last.bonds == ("a1", "a2")
        assert last.terminals == frozenset({"a1", "b1"})
        assert not last.walk.closed
        assert d.replay() == g

    def test_parallel_circuit_ear(self):
        g = parallel_pair()
        d = build_graft_ear_decomposition(g, "r", min_join(g))
        assert [s.kind for s in d.steps] == ["straight", "round"]
        assert d.steps[-1].walk.closed
        assert d.steps[-1].bonds == ("a1",)
        assert d.replay() == g

    def test_star_prefers_round_over_join_edge(self):
        g = obg(["r", "a1", "a2", "b1"],
                [("c1", "r", "a1"), ("c2", "r", "a2"),
                 ("d", "a2", "b1"), ("e1", "a1", "b1")],
                {"a1", "b1"}, {"a1", "a2"}, {"r", "b1"})
        d = build_graft_ear_decomposition(g, "r", min_join(g))
        assert [s.kind for s in d.steps] == ["straight", "straight", "round"]
        round_ear = d.steps[-1]
        assert round_ear.walk == Walk(("a2", "b1", "a1"), ("d", "e1"))
        assert round_ear.terminals == frozenset({"a1", "b1"})
        assert d.replay() == g

    def test_leftover_support_edge(self):
        g = obg(["r", "a1", "b1", "a2"],
                [("c1", "r", "a1"), ("e1", "a1", "b1"), ("c2", "b1", "a2"),
                 ("c3", "a2", "r"), ("d", "a1", "b1")],
                {"a1", "b1"}, {"a1", "a2"}, {"r", "b1"})
        F = min_join(g)
        d = build_graft_ear_decomposition(g, "r", F)
        leftover = d.steps[-1]
        assert leftover.kind == "round"
        spare = {"d", "e1"} - set(F.edge_ids)
        assert set(leftover.walk.edge_ids) == spare
        assert leftover.terminals == frozenset()
        assert d.replay() == g

    def test_singleton_target(self):
        g = singleton()
        d = build_graft_ear_decomposition(g, "r", frozenset())
        assert d.steps == ()
        assert d.replay() == g

    def test_rejects_non_critical(self):
        g = chain4()
        with pytest.raises(PreconditionError):
            build_graft_ear_decomposition(g, "b0", min_join(g))

    def test_rejects_non_minimum_join(self):
        g = square()
        with pytest.raises(PreconditionError):
            build_graft_ear_decomposition(g, "r", {"c1", "e1", "c2"})

    def test_rejects_spine_root(self):
        g = p3r()
        with pytest.raises(PreconditionError):
            build_graft_ear_decomposition(g, "a1", min_join(g))

    def test_prefix_grafts_are_critical(self):
        g = square()
        d = build_graft_ear_decomposition(g, "r", min_join(g))
        for prefix in d.prefixes():
            assert is_critical_quasicomb(prefix, "r").critical

    def test_steps_balanced_for_build_join(self):
        g = square()
        F = min_join(g)
        d = build_graft_ear_decomposition(g, "r", F)
        for step in d.steps:
            share = frozenset(F.edge_ids) & step.edge_ids
            assert is_f_balanced(g, share, step)


class TestVerifier:
    def test_builds_verify(self):
        for g in (p3r(), square(), parallel_pair()):
            F = min_join(g)
            d = build_graft_ear_decomposition(g, "r", F)
            plain = verify_graft_ear_decomposition(d)
            assert plain.valid and plain.problems == ()
            with_join = verify_graft_ear_decomposition(d, F)
            assert with_join.valid
            assert all(c.prefix_critical for c in with_join.step_checks)
            assert all(c.step_join_minimum for c in with_join.step_checks)

    def test_other_minimum_join_also_passes(self):
        g = parallel_pair()
        d = build_graft_ear_decomposition(g, "r", {"d"})
        report = verify_graft_ear_decomposition(d, {"e"})
        assert report.valid

    def test_swapped_steps_fatal(self):
        g = p3r()
        d = build_graft_ear_decomposition(g, "r", min_join(g))
        swapped = GraftEarDecomposition("r", (d.steps[1], d.steps[0]), g)
        report = verify_graft_ear_decomposition(swapped)
        assert not report.valid
        assert any("bond" in p for p in report.problems)

    def test_dropped_terminals_breaks_criticality(self):
        g = p3r()
        d = build_graft_ear_decomposition(g, "r", min_join(g))
        s = d.steps[1]
        bad = EarStep(s.walk, s.bonds, frozenset(), s.spine, s.tooth)
        report = verify_graft_ear_decomposition(
            GraftEarDecomposition("r", (d.steps[0], bad), g))
        assert not report.valid
        assert any("not critical" in p for p in report.problems)
        assert any("differs from the target" in p for p in report.problems)

    def test_non_minimum_join_reported(self):
        g = p3r()
        d = build_graft_ear_decomposition(g, "r", min_join(g))
        report = verify_graft_ear_decomposition(d, {"c"})
        assert not report.valid
        assert any("minimum join" in p for p in report.problems)

    def test_spine_root_reported(self):
        g = p3r()
        d = build_graft_ear_decomposition(g, "r", min_join(g))
        relabeled = GraftEarDecomposition("a1", d.steps, g)
        report = verify_graft_ear_decomposition(relabeled)
        assert not report.valid
        assert any("tooth side" in p for p in report.problems)

    def test_empty_decomposition(self):
        g = singleton()
        good = verify_graft_ear_decomposition(
            GraftEarDecomposition("r", (), g))
        assert good.valid
        bad = verify_graft_ear_decomposition(
            GraftEarDecomposition("r", (), p3r()))
        assert not bad.valid

    def test_root_must_be_target_vertex(self):
        with pytest.raises(GraftInputError):
            GraftEarDecomposition("zz", (), p3r())


class TestRootedDistances:
    """Criticality tables agree with independently computed distances."""

    def test_tables_match_f_distance(self):
        for g in (p3r(), square(), parallel_pair(), outward_stub()):
            rep = is_critical_quasicomb(g, "r")
            for v, value in rep.table:
                assert value == f_distance_int(g, v, "r")

    def test_weight_zero_paths_from_tooth(self):
        from bigraft.joins import extract_shortest_path
        for g in (square(), parallel_pair()):
            F = min_join(g)
            for b in sorted(g.tooth - {"r"}, key=str):
                report = extract_shortest_path(g, F, b, "r")
                assert report.weight == 0
                assert report.balanced
                assert report.edge_ids[0] in F
