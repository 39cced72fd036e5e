"""Factor components, separating sets, and the distance-zero partition."""

import pytest

from bigraft.core import Graft, GraftInputError, Multigraph
from bigraft.decomposition import (
    allowed_edge_set,
    factor_components,
    is_separating,
    kl_classes_of_component,
    kl_partition,
)
from bigraft.instances import c4, chain4, k2, p3r
from bigraft.joins import all_min_joins, f_weight, min_join
from oracles import brute_allowed


class TestAllowedEdgeSet:
    def test_k2(self):
        assert allowed_edge_set(k2()) == {"e"}

    def test_c4_all_allowed(self):
        assert allowed_edge_set(c4()) == {"f1", "f2", "f3", "f4"}

    def test_chain4_bridge_not_allowed(self):
        assert allowed_edge_set(chain4()) == {"e0", "e1"}

    def test_matches_brute_union(self):
        for g in (k2(), c4(), chain4(), p3r()):
            union = frozenset().union(*all_min_joins(g)) if all_min_joins(g) else frozenset()
            assert allowed_edge_set(g) == frozenset(
                eid for eid in g.graph.edge_ids() if brute_allowed(g, eid))
            assert allowed_edge_set(g) == union


class TestFactorComponents:
    def test_chain4_two_components(self):
        comps = factor_components(chain4())
        assert comps.vertex_sets() == (frozenset({"a0", "b0"}), frozenset({"a1", "b1"}))
        assert comps.ids() == ("a0", "a1")

    def test_c4_single_component(self):
        comps = factor_components(c4())
        assert len(comps) == 1
        assert comps.components[0].vertices == {"v1", "v2", "v3", "v4"}
        assert comps.components[0].id == "v1"

    def test_p3r_isolated_root(self):
        comps = factor_components(p3r())
        assert comps.vertex_sets() == (frozenset({"a1", "b1"}), frozenset({"r"}))

    def test_subgraph_keeps_only_allowed_edges(self):
        comps = factor_components(chain4())
        assert comps.by_id("a0").subgraph.edge_ids() == {"e0"}

    def test_component_lookup(self):
        comps = factor_components(chain4())
        assert comps.component_of("b1").id == "a1"
        with pytest.raises(GraftInputError):
            comps.by_id("zz")
        with pytest.raises(GraftInputError):
            comps.component_of("zz")


class TestIsSeparating:
    def test_chain4_first_component(self):
        ok, witness = is_separating(chain4(), {"a0", "b0"})
        assert ok
        assert witness == ("a0",)

    def test_chain4_diagonal_is_not(self):
        ok, witness = is_separating(chain4(), {"a0", "a1"})
        assert not ok
        assert set(witness) == {"a0", "a1"}

    def test_empty_set_separates(self):
        ok, witness = is_separating(chain4(), set())
        assert ok
        assert witness == ()

    def test_whole_vertex_set(self):
        g = p3r()
        ok, witness = is_separating(g, g.graph.vertices)
        assert ok
        assert witness == ("a1", "r")

    def test_unknown_vertex(self):
        with pytest.raises(GraftInputError):
            is_separating(k2(), {"zz"})

    def test_cut_property_on_references(self):
        # no minimum join crosses the boundary of a separating set
        for g in (chain4(), p3r()):
            comps = factor_components(g)
            for comp in comps:
                boundary = {e.id for e in g.graph.edges
                            if (e.u in comp.vertices) != (e.v in comp.vertices)}
                for F in all_min_joins(g):
                    assert not (F & boundary)


class TestKLPartition:
    def test_c4(self):
        part = kl_partition(c4())
        assert set(part.as_sets()) == {
            frozenset({"v1", "v3"}), frozenset({"v2"}), frozenset({"v4"})}

    def test_k2(self):
        part = kl_partition(k2())
        assert set(part.as_sets()) == {frozenset({"a"}), frozenset({"b"})}

    def test_chain4_all_singletons(self):
        part = kl_partition(chain4())
        assert set(part.as_sets()) == {
            frozenset({"a0"}), frozenset({"b0"}), frozenset({"a1"}), frozenset({"b1"})}

    def test_lookup_maps(self):
        part = kl_partition(c4())
        assert part.class_id_of("v3") == "v1"
        assert part.class_of("v3") == {"v1", "v3"}
        assert part.component_id_of("v3") == "v1"
        assert part.same_class("v1", "v3")
        assert not part.same_class("v1", "v2")
        with pytest.raises(GraftInputError):
            part.class_id_of("zz")

    def test_classes_refine_components(self):
        for g in (c4(), chain4(), p3r()):
            part = kl_partition(g)
            comps = factor_components(g)
            for cls, cid in zip(part.classes, part.component_ids):
                assert cls <= comps.by_id(cid).vertices


class TestKLClassesOfComponent:
    def test_c4(self):
        part = kl_partition(c4())
        assert len(kl_classes_of_component(part, "v1")) == 3

    def test_chain4(self):
        part = kl_partition(chain4())
        assert set(kl_classes_of_component(part, "a0")) == {
            frozenset({"a0"}), frozenset({"b0"})}

    def test_singleton_component(self):
        part = kl_partition(p3r())
        assert kl_classes_of_component(part, "r") == (frozenset({"r"}),)

    def test_unknown_id(self):
        part = kl_partition(c4())
        with pytest.raises(GraftInputError):
            kl_classes_of_component(part, "zz")


class TestCombSpecialization:
    def test_spine_side_is_one_class_per_component(self):
        # in a comb, the spine vertices of each factor component form
        # exactly one distance-zero class
        for g in (k2(), c4(), chain4()):
            part = kl_partition(g)
            comps = factor_components(g)
            for comp in comps:
                spine_side = comp.vertices & g.spine
                if not spine_side:
                    continue
                ids = {part.class_id_of(v) for v in spine_side}
                assert len(ids) == 1
                assert part.class_of(next(iter(spine_side))) == spine_side

    def test_comb_distance_table_values(self):
        from bigraft.joins import f_distance_int
        for g in (k2(), c4(), chain4()):
            comps = factor_components(g)
            for comp in comps:
                for u in comp.vertices:
                    for v in comp.vertices:
                        d = f_distance_int(g, u, v)
                        if u in g.spine and v in g.spine:
                            assert d == 0
                        elif (u in g.spine) != (v in g.spine):
                            assert d == -1
                        else:
                            assert d in (0, -2)
