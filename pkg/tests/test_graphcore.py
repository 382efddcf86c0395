import networkx as nx
import pytest
from hypothesis import given, strategies as st

from fliplab.errors import CapExceeded
from fliplab.generators import (
    complete_bipartite,
    complete_graph,
    cycle_graph,
    gnp,
    grid_graph,
    path_graph,
    random_ktt_free,
    random_tree,
    star_graph,
)
from fliplab.graph import (
    INF,
    Graph,
    Partition,
    apply_pflip,
    ball,
    count_flip_specs,
    delete_vertices,
    distance,
    enumerate_pflips,
    find_ktt,
    flip_pair,
    is_ktt_free,
    isolate_vertices,
    isolation_as_flips,
    k_flips,
    parse_radius,
    set_partitions,
)
from fliplab.oracles import distance_reference, flip_reference, has_ktt_naive

from .conftest import flip_specs, graph_and_partition, graphs, partitions


def to_nx(G):
    H = nx.Graph()
    H.add_nodes_from(range(G.n))
    H.add_edges_from(G.edges)
    return H


class TestGraph:
    def test_rejects_asymmetric_adjacency(self):
        with pytest.raises(ValueError):
            Graph(2, (0b10, 0))

    def test_rejects_self_loop(self):
        with pytest.raises(ValueError):
            Graph.from_edges(2, [(0, 0)])

    def test_edges_and_degree(self):
        G = path_graph(4)
        assert G.edges == {(0, 1), (1, 2), (2, 3)}
        assert [G.degree(v) for v in range(4)] == [1, 2, 2, 1]

    def test_induced_renumbers(self):
        H, index = path_graph(5).induced([4, 2, 3])
        assert index == {2: 0, 3: 1, 4: 2}
        assert H.edges == {(0, 1), (1, 2)}


class TestRadius:
    @pytest.mark.parametrize("text", ["inf", "Infinity", "∞"])
    def test_infinity_spellings(self, text):
        assert parse_radius(text) == INF

    @pytest.mark.parametrize("bad", ["-1", "x", 1.5, -2])
    def test_rejects(self, bad):
        with pytest.raises(ValueError):
            parse_radius(bad)


class TestFlips:
    def test_flip_pair_completes_the_missing_edge(self):
        assert flip_pair(path_graph(3), {0}, {2}).edges == {(0, 1), (1, 2), (0, 2)}

    def test_flip_pair_with_empty_side(self):
        G = cycle_graph(5)
        assert flip_pair(G, set(), {1, 2}) == G

    def test_full_self_flip_of_k4(self):
        G = complete_graph(4)
        assert flip_pair(G, range(4), range(4)).m == 0

    def test_empty_spec_is_identity(self):
        G = cycle_graph(5)
        assert apply_pflip(G, Partition.whole(5), frozenset()) == G

    def test_singletons_off_diagonal_gives_complement(self):
        G = path_graph(5)
        F = frozenset((i, j) for i in range(5) for j in range(i + 1, 5))
        assert apply_pflip(G, Partition.singletons(5), F) == G.complement()

    @pytest.mark.parametrize("k,count", [(1, 2), (2, 8), (3, 64)])
    def test_enumeration_sizes(self, k, count):
        P = Partition.from_labels(list(range(k)) * 2)
        specs = enumerate_pflips(P)
        assert len(specs) == count == len(set(specs))

    def test_enumeration_cap(self):
        with pytest.raises(CapExceeded):
            enumerate_pflips(Partition.singletons(5), cap=4)

    @given(graph_and_partition(), st.data())
    def test_involution(self, gp, data):
        G, P = gp
        F = data.draw(flip_specs(P))
        assert apply_pflip(apply_pflip(G, P, F), P, F) == G

    @given(graph_and_partition(), st.data())
    def test_matches_set_reference(self, gp, data):
        G, P = gp
        F = data.draw(flip_specs(P))
        H = apply_pflip(G, P, F)
        assert {frozenset(e) for e in H.edges} == flip_reference(G, P.blocks, F)

    @given(graph_and_partition(), st.data())
    def test_hereditary(self, gp, data):
        G, P = gp
        F = data.draw(flip_specs(P))
        S = data.draw(st.sets(st.integers(0, G.n - 1), min_size=1))
        sub_P, remap = P.restrict(S)
        sub_F = frozenset(tuple(sorted((remap[i], remap[j]))) for i, j in F if i in remap and j in remap)
        assert apply_pflip(G, P, F).induced(S)[0] == apply_pflip(G.induced(S)[0], sub_P, sub_F)

    @given(graph_and_partition(), st.data())
    def test_transitive_over_common_refinement(self, gp, data):
        G, P = gp
        Q = data.draw(partitions(G.n))
        F, F2 = data.draw(flip_specs(P)), data.draw(flip_specs(Q))
        R = P.common_refinement(Q)
        assert len(R) <= len(P) * len(Q)
        pp, qp = R.parents_in(P), R.parents_in(Q)
        combined = frozenset(
            (a, b) for a in range(len(R)) for b in range(a, len(R))
            if ((min(pp[a], pp[b]), max(pp[a], pp[b])) in F) != ((min(qp[a], qp[b]), max(qp[a], qp[b])) in F2)
        )
        assert apply_pflip(apply_pflip(G, P, F), Q, F2) == apply_pflip(G, R, combined)

    def test_set_partitions_count_bell_numbers(self):
        assert [sum(1 for _ in set_partitions(n, n)) for n in range(1, 7)] == [1, 2, 5, 15, 52, 203]

    def test_k_flips_deduplicated(self):
        G = path_graph(4)
        flips = k_flips(G, 2)
        assert len({H.adj for H in flips}) == len(flips)
        assert G in flips and G.complement() in flips
        assert len(flips) <= count_flip_specs(4, 2)


class TestDistances:
    def test_ball_radius_zero(self):
        assert ball(cycle_graph(5), 3, 0) == {3}

    def test_ball_on_path(self):
        assert ball(path_graph(4), 0, 2) == {0, 1, 2}

    def test_infinite_ball_is_component(self):
        G = Graph.from_edges(5, [(0, 1), (1, 2), (3, 4)])
        assert ball(G, 0, INF) == {0, 1, 2}

    def test_distance_cases(self):
        assert distance(path_graph(3), 1, 1) == 0
        assert distance(path_graph(3), 0, 2) == 2
        assert distance(Graph.edgeless(2), 0, 1) == INF

    @given(graphs(max_n=7), st.data())
    def test_ball_is_distance_sublevel_set(self, G, data):
        v = data.draw(st.integers(0, G.n - 1))
        r = data.draw(st.sampled_from([0, 1, 2, 3, INF]))
        assert ball(G, v, r) == {u for u in range(G.n) if distance(G, v, u) < INF and distance(G, v, u) <= r}

    @given(graphs(max_n=6), st.data())
    def test_distance_matches_path_enumeration(self, G, data):
        u, v = data.draw(st.integers(0, G.n - 1)), data.draw(st.integers(0, G.n - 1))
        assert distance(G, u, v) == distance_reference(G, u, v)


class TestDeletion:
    def test_empty_set(self):
        G = cycle_graph(4)
        assert delete_vertices(G, [])[0] == G and isolate_vertices(G, []) == G

    def test_isolate_triangle_vertex(self):
        assert isolate_vertices(complete_graph(3), [0]).edges == {(1, 2)}

    def test_delete_path_centre(self):
        H, index = delete_vertices(path_graph(3), [1])
        assert H.n == 2 and H.m == 0 and index == {0: 0, 2: 1}

    @pytest.mark.parametrize("G,v", [(complete_graph(2), 0), (star_graph(4), 0)])
    def test_isolation_flip_leaves_edgeless(self, G, v):
        P, F = isolation_as_flips(G, v)
        assert apply_pflip(G, P, F).m == 0

    def test_isolation_flip_of_isolated_vertex(self):
        G = Graph.from_edges(3, [(1, 2)])
        P, F = isolation_as_flips(G, 0)
        assert apply_pflip(G, P, F) == G

    @given(graphs(max_n=7), st.data())
    def test_isolation_flip_matches_isolate(self, G, data):
        v = data.draw(st.integers(0, G.n - 1))
        P, F = isolation_as_flips(G, v)
        assert len(P) <= 3
        assert apply_pflip(G, P, F) == isolate_vertices(G, [v])


class TestBicliques:
    def test_forests_are_k22_free(self):
        for seed in range(20):
            assert is_ktt_free(random_tree(12, seed), 2)[0]

    def test_k22_witness(self):
        free, (A, B) = is_ktt_free(complete_bipartite(2, 2), 2)
        assert not free and len(A) == len(B) == 2 and not A & B

    def test_k4_contains_k22_as_subgraph(self):
        assert not is_ktt_free(complete_graph(4), 2)[0]
        assert has_ktt_naive(complete_graph(4), 2)

    @given(graphs(max_n=8), st.integers(1, 3))
    def test_agrees_with_naive(self, G, t):
        free, w = is_ktt_free(G, t)
        assert free == (not has_ktt_naive(G, t))
        if w:
            A, B = w
            assert all(G.has_edge(a, b) for a in A for b in B)

    def test_rejection_sampler(self):
        G = random_ktt_free(12, 2, 0.25, seed=5)
        assert find_ktt(G, 2) is None


class TestGenerators:
    def test_gnp_deterministic_and_p_zero(self):
        assert gnp(10, 0.3, 7) == gnp(10, 0.3, 7)
        assert gnp(10, 0.0, 1).m == 0

    def test_shapes(self):
        assert grid_graph(3, 3).m == 12
        assert star_graph(5).degree(0) == 5
        assert random_tree(9, 2).m == 8
        assert nx.is_tree(to_nx(random_tree(9, 2)))
