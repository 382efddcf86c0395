"""Graph generators. Every random generator takes an explicit integer seed."""
from __future__ import annotations

import random
from itertools import combinations
from typing import Iterator

from .errors import CapExceeded
from .graph import Graph, find_ktt


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def star_graph(leaves: int) -> Graph:
    """K_{1,leaves} with centre 0."""
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, combinations(range(n), 2))


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph.from_edges(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def grid_graph(rows: int, cols: int) -> Graph:
    edges = []
    for i in range(rows):
        for j in range(cols):
            v = i * cols + j
            if j + 1 < cols:
                edges.append((v, v + 1))
            if i + 1 < rows:
                edges.append((v, v + cols))
    return Graph.from_edges(rows * cols, edges)


def random_tree(n: int, seed: int) -> Graph:
    rng = random.Random(seed)
    return Graph.from_edges(n, [(rng.randrange(v), v) for v in range(1, n)])


def gnp(n: int, p: float, seed: int) -> Graph:
    rng = random.Random(seed)
    return Graph.from_edges(n, [e for e in combinations(range(n), 2) if rng.random() < p])


def random_ktt_free(n: int, t: int, p: float, seed: int, max_tries: int = 1000) -> Graph:
    """Rejection-sample G(n, p) until the sample is K_{t,t}-free."""
    rng = random.Random(seed)
    for _ in range(max_tries):
        G = gnp(n, p, rng.getrandbits(64))
        if find_ktt(G, t) is None:
            return G
    raise CapExceeded(f"no K_{t},{t}-free sample in {max_tries} tries (n={n}, p={p})")


def from_edge_mask(n: int, mask: int) -> Graph:
    """Graph whose i-th possible edge (lexicographic pairs) is present iff bit i of mask."""
    adj = [0] * n
    for idx, (u, v) in enumerate(combinations(range(n), 2)):
        if mask >> idx & 1:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
    return Graph(n, tuple(adj))


def all_graphs(n: int) -> Iterator[Graph]:
    """Every labeled graph on n vertices (2^(n choose 2) of them)."""
    for mask in range(1 << (n * (n - 1) // 2)):
        yield from_edge_mask(n, mask)


def is_connected(G: Graph) -> bool:
    if G.n == 0:
        return True
    seen = frontier = 1
    while frontier:
        nb = 0
        for v in range(G.n):
            if frontier >> v & 1:
                nb |= G.adj[v]
        frontier = nb & ~seen
        seen |= frontier
    return seen == G.full_mask


def random_order(n: int, rng: random.Random) -> tuple[int, ...]:
    perm = list(range(n))
    rng.shuffle(perm)
    return tuple(perm)


GENERATORS = {
    "path": lambda a: path_graph(a.n),
    "cycle": lambda a: cycle_graph(a.n),
    "star": lambda a: star_graph(a.n - 1),
    "complete": lambda a: complete_graph(a.n),
    "grid": lambda a: grid_graph(a.rows, a.cols),
    "tree": lambda a: random_tree(a.n, a.seed),
    "gnp": lambda a: gnp(a.n, a.p, a.seed),
    "ktt-free": lambda a: random_ktt_free(a.n, a.t, a.p, a.seed),
}
