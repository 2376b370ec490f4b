import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from app.models.errors import OrdinalError, UnsupportedCaseError
from app.models.ordinal import OMEGA, Ordinal
from app.models.schemas import FiniteTree
from app.services.sampling import OrdinalSampler, enumerate_below
from app.services.witnesses import (
    cb_rank_coloring,
    full_subtrees_exist,
    mermelstein_witness,
    omega_dot_2_top_witness,
    partite_from_point_coloring,
    witnesses,
)

W2 = Ordinal.omega_power(2)
W2_2 = Ordinal.omega_power(2, 2)


class TestPointColorings:
    def test_cb_rank_coloring(self):
        assert cb_rank_coloring(2)(OMEGA * 3) == 1
        assert cb_rank_coloring(3)(W2_2 + 5) == 0

    def test_cb_rank_coloring_range(self):
        color = cb_rank_coloring(2)
        sampler = OrdinalSampler(7)
        assert {color(x) for x in sampler.sample(W2, 1000)} <= {0, 1}

    def test_cb_rank_coloring_rejects_outside_points(self):
        with pytest.raises(OrdinalError):
            cb_rank_coloring(2)(W2)
        with pytest.raises(OrdinalError):
            cb_rank_coloring(0)

    def test_classes_have_their_own_rank(self):
        # every point of class i has CB rank i, so a limit of class-i points has rank > i
        color = cb_rank_coloring(3)
        for x in enumerate_below(Ordinal.omega_power(3)):
            if not x.is_zero and x.is_limit:
                assert color(x.fundamental(0)) < color(x)

    def test_partite_coloring(self):
        d = partite_from_point_coloring(cb_rank_coloring(2))
        assert d(OMEGA, OMEGA * 2) == "red"
        assert d(Ordinal.of(1), OMEGA) == "blue"
        with pytest.raises(OrdinalError):
            d(OMEGA, OMEGA)

    def test_blue_cliques_use_distinct_classes(self):
        c = cb_rank_coloring(3)
        d = partite_from_point_coloring(c)
        points = OrdinalSampler(11).sample(Ordinal.omega_power(3), 30)
        for triple in itertools.combinations(sorted(set(points)), 3):
            if all(d(x, y) == "blue" for x, y in itertools.combinations(triple, 2)):
                assert len({c(x) for x in triple}) == 3


class TestMermelsteinWitness:
    def test_shape(self):
        w = mermelstein_witness()
        assert len(w.classes) == 8
        assert len(w.adjacency) == 11
        assert w.space_bound == W2_2 + OMEGA
        assert w.closed

    def test_pair_colors(self):
        w = mermelstein_witness()
        assert witnesses.pair_color(w, 0, OMEGA) == "blue"
        assert witnesses.pair_color(w, 0, W2) == "red"
        assert witnesses.pair_color(w, W2, W2_2) == "blue"
        assert witnesses.pair_color(w, W2_2 + 1, 5) == "blue"

    def test_classes(self):
        w = mermelstein_witness()
        assert witnesses.class_of(w, W2 + 1) == "bottom2"
        assert witnesses.class_of(w, W2 + OMEGA * 3) == "middle2"
        assert witnesses.class_of(w, W2_2 + OMEGA) == "middle3"
        with pytest.raises(OrdinalError):
            witnesses.class_of(w, W2_2 + OMEGA + 1)

    def test_triangle_free(self):
        assert witnesses.verify_graph_triangle_free(mermelstein_witness())

    def test_added_edge_creates_triangle(self):
        w = mermelstein_witness()
        corrupted = w.model_copy(update={"adjacency": w.adjacency | {frozenset(("top1", "bottom1"))}})
        assert not witnesses.verify_graph_triangle_free(corrupted)

    def test_partition_on_enumerated_shapes(self):
        assert witnesses.verify_partition_symbolic(mermelstein_witness()) == []


class TestOmegaDotTwoWitness:
    def test_shape(self):
        w = omega_dot_2_top_witness()
        assert len(w.classes) == 6
        assert len(w.adjacency) == 7

    def test_pair_colors(self):
        w = omega_dot_2_top_witness()
        assert witnesses.pair_color(w, 0, W2) == "blue"
        assert witnesses.pair_color(w, OMEGA, W2 + OMEGA) == "blue"
        assert witnesses.pair_color(w, OMEGA, W2) == "red"

    def test_pair_color_is_symmetric(self):
        w = omega_dot_2_top_witness()
        points = enumerate_below(W2_2, cap=2) + [W2_2]
        for x, y in itertools.combinations(points[:40], 2):
            assert witnesses.pair_color(w, x, y) == witnesses.pair_color(w, y, x)

    def test_triangle_free(self):
        assert witnesses.verify_graph_triangle_free(omega_dot_2_top_witness())

    def test_partition_on_enumerated_shapes(self):
        assert witnesses.verify_partition_symbolic(omega_dot_2_top_witness()) == []


class TestSampledReport:
    @pytest.mark.parametrize("name", ["mermelstein", "omega-dot-2-top"])
    def test_no_violations(self, name):
        report = witnesses.sampled_homogeneity_report(
            witnesses.get(name), sample_size=20, trials=10_000, seed=20240601
        )
        assert report.violations == []
        assert report.verdict == "pass"

    def test_seeded_reports_repeat(self):
        w = mermelstein_witness()
        first = witnesses.sampled_homogeneity_report(w, 10, 50, seed=3)
        second = witnesses.sampled_homogeneity_report(w, 10, 50, seed=3)
        assert first == second

    def test_registry(self):
        assert witnesses.names() == ["mermelstein", "omega-dot-2-top"]
        with pytest.raises(UnsupportedCaseError):
            witnesses.get("sierpinski")


class TestSampling:
    def test_enumerate_below(self):
        assert enumerate_below(3) == [Ordinal.of(0), Ordinal.of(1), Ordinal.of(2)]
        shapes = enumerate_below(W2)
        assert OMEGA * 3 + 3 in shapes
        assert all(x < W2 for x in shapes)

    @given(st.integers(min_value=0, max_value=2**32))
    @settings(max_examples=30, deadline=None)
    def test_samples_stay_below(self, seed):
        bound = W2_2 + OMEGA
        sampler = OrdinalSampler(seed)
        assert all(x < bound for x in sampler.sample(bound, 20))
        assert all(x <= bound for x in sampler.sample(bound, 20, inclusive=True))

    def test_nothing_below_zero(self):
        with pytest.raises(UnsupportedCaseError):
            OrdinalSampler(0).sample_below(0)


class TestFullSubtree:
    def test_single_level(self):
        t = FiniteTree(height=1, branching=3)
        found = witnesses.finite_full_subtree(t, {(0,): 0, (1,): 0, (2,): 1}, quorum=2)
        assert found.color == 0
        assert found.leaves == ((0,), (1,))

    def test_all_one_color(self):
        t = FiniteTree(height=2, branching=3)
        found = witnesses.finite_full_subtree(t, lambda leaf: 0, quorum=2)
        assert found.color == 0
        assert len(found.nodes) == 7
        assert len(found.leaves) == 4

    def test_quorum_law_by_brute_force(self):
        assert full_subtrees_exist(FiniteTree(height=2, branching=3), quorum=2)
        assert full_subtrees_exist(FiniteTree(height=1, branching=5), quorum=3)

    def test_quorum_too_large(self):
        assert not full_subtrees_exist(FiniteTree(height=1, branching=2), quorum=2)
        t = FiniteTree(height=1, branching=2)
        assert witnesses.finite_full_subtree(t, {(0,): 0, (1,): 1}, quorum=2) is None

    def test_quorum_must_be_positive(self):
        with pytest.raises(OrdinalError):
            witnesses.finite_full_subtree(FiniteTree(height=1, branching=1), {(0,): 0}, quorum=0)

    @given(st.lists(st.integers(min_value=0, max_value=1), min_size=27, max_size=27))
    @settings(max_examples=100, deadline=None)
    def test_height_three_subtrees(self, colors):
        t = FiniteTree(height=3, branching=3)
        coloring = dict(zip(witnesses.tree_leaves(t), colors))
        found = witnesses.finite_full_subtree(t, coloring, quorum=2)
        assert found is not None
        assert {coloring[leaf] for leaf in found.leaves} == {found.color}
        for node in found.nodes:
            if len(node) < t.height:
                children = [other for other in found.nodes if len(other) == len(node) + 1 and other[:-1] == node]
                assert len(children) == 2
