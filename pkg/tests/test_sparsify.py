import pytest
from hypothesis import assume, given, strategies as st

from fliplab.errors import InvalidWitness, NotKttFree
from fliplab.generators import complete_bipartite, complete_graph, cycle_graph, random_ktt_free, star_graph
from fliplab.graph import Graph, Partition, apply_pflip, distances_from, enumerate_pflips, find_ktt
from fliplab.sparsify import (
    COMPLETE,
    SMALL,
    check_reasons,
    complete_vertices,
    deletion_witness_from_flip,
    is_t_complete,
    is_t_small,
    refinement_delta,
    sparsify_set,
    verify_engine,
)

from .conftest import graph_and_partition

STAR_PARTS = [[0], [1, 2, 3, 4, 5]]


class TestPredicates:
    def test_small_threshold(self):
        assert is_t_small({0, 1, 2}, 2)
        assert not is_t_small({0, 1, 2, 3}, 2)
        assert not is_t_small({7}, 1)

    def test_complete(self):
        G = star_graph(5)
        assert is_t_complete(G, 0, {1, 2, 3, 4, 5}, 2)
        assert not is_t_complete(Graph.edgeless(4), 0, {1, 2, 3}, 2)

    def test_member_counts_itself_as_missing(self):
        # vertex 0 lies in its own block and is adjacent to the others: one miss, below t=2
        G = star_graph(3)
        assert is_t_complete(G, 0, {0, 1, 2, 3}, 2)
        assert not is_t_complete(G, 0, {0, 1, 2, 3}, 1)

    def test_complete_vertices_examples(self):
        assert complete_vertices(Graph.edgeless(5), range(5), 2) == frozenset()
        assert complete_vertices(complete_graph(5), range(5), 2) == frozenset(range(5))


class TestSparsifySet:
    def test_star(self):
        P = Partition.from_blocks(6, STAR_PARTS)
        rep = sparsify_set(star_graph(5), P, 2)
        assert rep.deleted == {0}
        assert rep.reasons[0].kind == SMALL
        assert rep.passed and rep.bound == 8

    def test_cycle_single_block(self):
        assert sparsify_set(cycle_graph(5), Partition.whole(5), 2).deleted == frozenset()

    def test_singletons_delete_everything(self):
        rep = sparsify_set(cycle_graph(5), Partition.singletons(5), 2)
        assert rep.deleted == frozenset(range(5))

    def test_complete_reason(self):
        # centre is 2-complete to the 4-leaf block, which is 2-big
        G = star_graph(4)
        P = Partition.from_blocks(5, [[0, 1, 2, 3, 4]])
        rep = sparsify_set(G, P, 2)
        assert rep.deleted == {0}
        assert rep.reasons[0].kind == COMPLETE
        assert check_reasons(G, P, rep)

    def test_json_shape(self):
        rep = sparsify_set(star_graph(5), Partition.from_blocks(6, STAR_PARTS), 2)
        assert rep.to_json() == {"schema": 1, "deleted": [0], "reasons": {"0": "in-small-part(0)"},
                                 "bound": 8, "passed": True}

    @given(graph_and_partition(max_n=8), st.sampled_from([2, 3]))
    def test_bounds_on_ktt_free_graphs(self, gp, t):
        G, P = gp
        assume(find_ktt(G, t) is None)
        rep = sparsify_set(G, P, t)
        assert len(rep.deleted) < len(P) * t * t
        assert check_reasons(G, P, rep)
        for block in P.blocks:
            if not is_t_small(block, t):
                assert len(complete_vertices(G, block, t)) < t


class TestEngine:
    def test_empty_flip(self):
        G = cycle_graph(6)
        assert verify_engine(G, Partition.whole(6), 2, frozenset()).passed

    def test_all_flips_over_two_blocks(self):
        for seed in range(15):
            G = random_ktt_free(10, 2, 0.3, seed)
            P = Partition.from_labels([v % 2 for v in range(10)])
            for F in enumerate_pflips(P):
                assert verify_engine(G, P, 2, F).passed

    def test_mutated_deletion_set_is_caught(self):
        G = star_graph(5)
        P = Partition.from_blocks(6, STAR_PARTS)
        F = frozenset({(0, 1)})
        assert verify_engine(G, P, 2, F).passed
        bad = verify_engine(G, P, 2, F, deleted=[])
        assert not bad.passed and bad.edge_violation is not None

    def test_refuses_graphs_with_bicliques(self):
        with pytest.raises(NotKttFree):
            verify_engine(complete_bipartite(2, 2), Partition.whole(4), 2, frozenset())

    @given(graph_and_partition(max_n=7), st.data())
    def test_distance_stretch(self, gp, data):
        G, P = gp
        assume(find_ktt(G, 2) is None)
        F = data.draw(st.sampled_from(enumerate_pflips(P)))
        rep = verify_engine(G, P, 2, F)
        assert rep.passed, rep.to_json()


class TestRefinement:
    def test_identical_partition_rejected(self):
        P = Partition.from_labels([0, 0, 1, 1])
        with pytest.raises(InvalidWitness):
            refinement_delta(cycle_graph(4).complement(), P, P, 2)

    def test_split_small_part(self):
        G = cycle_graph(8)
        P = Partition.from_blocks(8, [[0, 1, 2, 3, 4], [5, 6, 7]])
        Q = Partition.from_blocks(8, [[0, 1, 2, 3, 4], [5], [6, 7]])
        assert refinement_delta(G, P, Q, 2) <= {5, 6, 7}

    def test_split_big_part(self):
        G = cycle_graph(10)
        P = Partition.whole(10)
        Q = Partition.from_blocks(10, [[0, 1, 2], list(range(3, 10))])
        delta = refinement_delta(G, P, Q, 2)
        assert len(delta) < 8


class TestDeletionWitness:
    def test_components_are_separated(self):
        G = Graph.from_edges(8, [(0, 1), (1, 2), (2, 3), (4, 5), (5, 6), (6, 7)])
        P = Partition.from_blocks(8, [[0, 1, 2, 3], [4, 5, 6, 7]])
        S, verdict = deletion_witness_from_flip(G, 2, P, frozenset(), [(0, 7), (1, 5)], 2)
        assert verdict.ok and verdict.separated == [(0, 7), (1, 5)]
        assert S == frozenset()

    def test_no_pairs(self):
        S, verdict = deletion_witness_from_flip(cycle_graph(5), 2, Partition.whole(5), frozenset(), [], 1)
        assert verdict.ok and not verdict.separated

    def test_radius_zero(self):
        G = cycle_graph(6)
        P = Partition.whole(6)
        S, verdict = deletion_witness_from_flip(G, 2, P, frozenset(), [(0, 3)], 0)
        assert verdict.ok and verdict.separated == [(0, 3)]

    def test_close_pair_rejected(self):
        G = cycle_graph(6)
        with pytest.raises(InvalidWitness):
            deletion_witness_from_flip(G, 2, Partition.whole(6), frozenset(), [(0, 3)], 1)

    def test_flip_separation_transfers(self):
        for seed in range(10):
            G = random_ktt_free(10, 2, 0.3, seed)
            P = Partition.from_labels([v % 3 for v in range(10)])
            for F in enumerate_pflips(P):
                H = apply_pflip(G, P, F)
                far = [(u, v) for u in range(10) for v in range(u + 1, 10) if distances_from(H, u)[v] > 3]
                _, verdict = deletion_witness_from_flip(G, 2, P, F, far, 1)
                assert verdict.ok
