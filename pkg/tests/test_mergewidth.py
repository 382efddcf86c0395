from itertools import combinations

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from fliplab.errors import CapExceeded, InvalidWitness, NotKttFree
from fliplab.generators import complete_bipartite, complete_graph, cycle_graph, path_graph, random_ktt_free, star_graph
from fliplab.graph import INF, Graph, Partition, all_pairs, apply_pflip
from fliplab.mergewidth import (
    RestrainedFlipSequence,
    Step,
    is_normalized,
    mw_from_order,
    normalize_rfs,
    order_from_rfs,
    radius_width,
    refine_flip,
    rfs_width,
    shatter,
    validate_rfs,
)
from fliplab.widths import sw_exact

from .conftest import graph_and_order, graphs


def brute_shatter(G, m):
    nbrs = [{u for u in range(G.n) if G.has_edge(u, v)} for v in range(G.n)]
    best = 0
    for size in range(min(m, G.n) + 1):
        for A in combinations(range(G.n), size):
            traces = {frozenset(nbrs[v] & set(A)) for v in range(G.n) if v not in A}
            best = max(best, size + len(traces))
    return best


def brute_radius_width(P, R, r):
    H = nx.Graph()
    H.add_nodes_from(range(P.n))
    H.add_edges_from(R)
    cutoff = None if r == INF else r
    best = 0
    for v in range(P.n):
        near = set(nx.single_source_shortest_path_length(H, v, cutoff=cutoff))
        best = max(best, sum(1 for b in P.blocks if b & near))
    return best


def two_step_p3():
    G = path_graph(3)
    steps = (
        Step(Partition.whole(3), all_pairs(3), frozenset()),
        Step(Partition.singletons(3), frozenset(), frozenset({(0, 1), (1, 2)})),
    )
    return G, RestrainedFlipSequence(3, steps)


class TestValidation:
    def test_single_vertex(self):
        seq = RestrainedFlipSequence(1, (Step(Partition.whole(1), frozenset(), frozenset()),))
        assert validate_rfs(Graph.edgeless(1), seq).ok
        assert rfs_width(Graph.edgeless(1), seq, 3) == 1

    def test_two_step_path(self):
        G, seq = two_step_p3()
        assert validate_rfs(G, seq).ok
        assert rfs_width(G, seq, 1) == 3

    def test_non_refining_chain(self):
        G = path_graph(4)
        seq = RestrainedFlipSequence(4, (
            Step(Partition.whole(4), all_pairs(4), frozenset()),
            Step(Partition.from_blocks(4, [[0, 1], [2, 3]]), all_pairs(4), frozenset()),
            Step(Partition.from_blocks(4, [[0, 2], [1], [3]]), all_pairs(4), frozenset()),
            Step(Partition.singletons(4), frozenset(), frozenset({(0, 1), (1, 2), (2, 3)})),
        ))
        rep = validate_rfs(G, seq)
        assert not rep.ok and rep.step == 2 and "refine" in rep.reason

    def test_edge_outside_restraint(self):
        G, seq = two_step_p3()
        bad = RestrainedFlipSequence(3, (seq.steps[0], Step(seq.steps[1].partition, frozenset(), frozenset())))
        rep = validate_rfs(G, bad)
        assert not rep.ok and rep.step == 1
        with pytest.raises(InvalidWitness):
            rfs_width(G, bad, 1)

    def test_first_restraint_must_be_everything(self):
        G, seq = two_step_p3()
        bad = RestrainedFlipSequence(3, (Step(Partition.whole(3), G.edges, frozenset()), seq.steps[1]))
        assert validate_rfs(G, bad).reason == "first restraint must be all vertex pairs"

    def test_json_round_trip(self):
        seq, _ = mw_from_order(path_graph(6), range(6), 1)
        for compact in (False, True):
            assert RestrainedFlipSequence.from_json(seq.to_json(compact)) == seq

    def test_malformed_json(self):
        with pytest.raises(InvalidWitness):
            RestrainedFlipSequence.from_json({"n": 2, "steps": [{"blocks": [[0, 1]]}]})


class TestRadiusWidth:
    def test_single_block(self):
        assert radius_width(Partition.whole(5), all_pairs(5), 2)[0] == 1

    def test_singletons_without_pairs(self):
        assert radius_width(Partition.singletons(5), frozenset(), INF)[0] == 1

    def test_path_interior_vertex(self):
        value, v = radius_width(Partition.singletons(5), path_graph(5).edges, 1)
        assert value == 3 and v in (1, 2, 3)

    @given(graphs(max_n=7), st.data())
    def test_matches_networkx_balls(self, G, data):
        labels = data.draw(st.lists(st.integers(0, 3), min_size=G.n, max_size=G.n))
        P = Partition.from_labels(labels)
        r = data.draw(st.sampled_from([0, 1, 2, INF]))
        assert radius_width(P, G.edges, r)[0] == brute_radius_width(P, G.edges, r)


class TestNormalize:
    def test_path_gets_one_split_per_step(self):
        G, seq = two_step_p3()
        out = normalize_rfs(G, seq)
        assert len(out) == 3 and is_normalized(out)
        assert validate_rfs(G, out).ok
        for r in (1, 2, INF):
            assert rfs_width(G, out, r) == rfs_width(G, seq, r)

    def test_idempotent(self):
        G, seq = two_step_p3()
        once = normalize_rfs(G, seq)
        assert normalize_rfs(G, once) == once

    def test_duplicate_partitions_collapse(self):
        G, seq = two_step_p3()
        doubled = RestrainedFlipSequence(3, (seq.steps[0], seq.steps[0], seq.steps[1], seq.steps[1]))
        assert is_normalized(normalize_rfs(G, doubled, r=1))

    def test_refine_flip_preserves_graph(self):
        G = cycle_graph(6)
        P = Partition.from_blocks(6, [[0, 1, 2], [3, 4, 5]])
        Q = Partition.from_blocks(6, [[0], [1, 2], [3, 4], [5]])
        F = frozenset({(0, 1), (1, 1)})
        assert apply_pflip(G, Q, refine_flip(P, F, Q)) == apply_pflip(G, P, F)

    @settings(max_examples=30)
    @given(graph_and_order(max_n=7), st.sampled_from([1, 2, INF]))
    def test_width_preserved_on_constructed_sequences(self, go, r):
        G, order = go
        seq, _ = mw_from_order(G, order, r)
        out = normalize_rfs(G, seq, r=r)
        assert validate_rfs(G, out).ok and is_normalized(out)


class TestShatter:
    def test_zero(self):
        assert shatter(cycle_graph(5), 0) == 1
        assert shatter(Graph.edgeless(0), 0) == 0

    @pytest.mark.parametrize("n,m", [(4, 1), (5, 2), (6, 3)])
    def test_complete_graph(self, n, m):
        assert shatter(complete_graph(n), m) == m + 1

    def test_cap(self):
        with pytest.raises(CapExceeded):
            shatter(Graph.edgeless(30), 10)

    @given(graphs(max_n=8), st.integers(0, 4))
    def test_matches_set_enumeration(self, G, m):
        assert shatter(G, m) == brute_shatter(G, m)


class TestFromOrder:
    def test_path_identity(self):
        seq, claim = mw_from_order(path_graph(6), range(6), 1)
        assert validate_rfs(path_graph(6), seq).ok
        assert claim.holds and claim.width <= 5 and claim.k == 1

    def test_star_centre_last(self):
        G = star_graph(4)
        seq, claim = mw_from_order(G, (1, 2, 3, 4, 0), 2)
        assert claim.holds and claim.width <= claim.power_bound

    def test_claim_json(self):
        _, claim = mw_from_order(path_graph(4), range(4), INF)
        data = claim.to_json()
        assert data["r"] == "inf" and data["holds"]

    @settings(max_examples=30)
    @given(graph_and_order(max_n=8), st.sampled_from([1, 2, 3, INF]))
    def test_bounds_hold(self, go, r):
        G, order = go
        seq, claim = mw_from_order(G, order, r)
        assert validate_rfs(G, seq).ok
        assert claim.width <= min(claim.power_bound, claim.shatter_bound)

    @settings(max_examples=30)
    @given(graph_and_order(max_n=7))
    def test_width_monotone_in_radius(self, go):
        G, order = go
        seq, _ = mw_from_order(G, order, 1)
        values = [rfs_width(G, seq, r) for r in (0, 1, 2, 3, INF)]
        assert values == sorted(values)


class TestToOrder:
    def test_path_pipeline(self):
        G = path_graph(8)
        seq = normalize_rfs(G, mw_from_order(G, range(8), 4)[0])
        order, cert = order_from_rfs(G, 2, seq, 1)
        assert sorted(order) == list(range(8))
        assert cert.holds and cert.measured <= cert.total
        assert cert.total == 2 * 4 + cert.d * 2 + cert.d * (cert.d + 1) * 8 + cert.d * 4 + cert.d ** 2 * 2

    def test_t_one_keeps_every_vertex(self):
        G = Graph.edgeless(4)
        seq, _ = mw_from_order(G, range(4), 4)
        order, cert = order_from_rfs(G, 1, seq, 1)
        assert sorted(order) == list(range(4)) and cert.holds

    def test_requires_normalised_input(self):
        G, seq = two_step_p3()
        with pytest.raises(InvalidWitness):
            order_from_rfs(G, 2, seq, 1)

    def test_requires_ktt_free(self):
        G = complete_bipartite(2, 2)
        seq, _ = mw_from_order(G, range(4), 4)
        with pytest.raises(NotKttFree):
            order_from_rfs(G, 2, seq, 1)

    def test_radius_zero_rejected(self):
        G = path_graph(3)
        seq, _ = mw_from_order(G, range(3), 1)
        with pytest.raises(ValueError):
            order_from_rfs(G, 2, seq, 0)

    def test_random_k22_free(self):
        for seed in range(8):
            G = random_ktt_free(9, 2, 0.3, seed)
            order = sw_exact(G, 5).order
            seq = normalize_rfs(G, mw_from_order(G, order, 4)[0])
            _, cert = order_from_rfs(G, 2, seq, 1)
            assert cert.holds
