import random

from hypothesis import HealthCheck, settings, strategies as st

from fliplab.graph import Graph, Partition

settings.register_profile("default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def graphs(draw, min_n=1, max_n=7):
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    bits = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph.from_edges(n, [p for p, b in zip(pairs, bits) if b])


@st.composite
def partitions(draw, n, max_blocks=3):
    k = draw(st.integers(1, max_blocks))
    labels = draw(st.lists(st.integers(0, k - 1), min_size=n, max_size=n))
    return Partition.from_labels(labels)


@st.composite
def graph_and_partition(draw, max_n=7, max_blocks=3):
    G = draw(graphs(max_n=max_n))
    return G, draw(partitions(G.n, max_blocks))


@st.composite
def flip_specs(draw, P):
    pairs = [(i, j) for i in range(len(P)) for j in range(i, len(P))]
    return frozenset(p for p in pairs if draw(st.booleans()))


@st.composite
def graph_and_order(draw, max_n=7):
    G = draw(graphs(max_n=max_n))
    order = draw(st.permutations(range(G.n)))
    return G, tuple(order)


radii = st.sampled_from([0, 1, 2, 3, float("inf")])


def seeded_orders(n, count, seed):
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        perm = list(range(n))
        rng.shuffle(perm)
        out.append(tuple(perm))
    return out
