"""Slow reference implementations used to cross-check the fast routines.

Everything here works on plain Python sets and explicit path enumeration,
sharing no code with the bitmask implementations it checks.
"""
from __future__ import annotations

from itertools import combinations

from .graph import INF, Graph


def neighbour_sets(G: Graph) -> list[set[int]]:
    return [{u for u in range(G.n) if G.adj[v] >> u & 1} for v in range(G.n)]


def simple_paths(nbrs: list[set[int]], start: int, max_len):
    """Every simple path from ``start`` with at most ``max_len`` edges."""
    limit = len(nbrs) if max_len == INF else max_len
    stack = [(start,)]
    while stack:
        path = stack.pop()
        yield path
        if len(path) - 1 < limit:
            for u in nbrs[path[-1]]:
                if u not in path:
                    stack.append(path + (u,))


def sep_by_paths(G: Graph, v: int, S, r) -> set[int]:
    """Endpoints in S of paths from v of length <= r whose inner vertices avoid S."""
    S = set(S)
    nbrs = neighbour_sets(G)
    out = set()
    for path in simple_paths(nbrs, v, r):
        if len(path) > 1 and path[-1] in S and not (set(path[1:-1]) & S):
            out.add(path[-1])
    return out


def sreach_by_paths(G: Graph, order, v: int, r) -> set[int]:
    pos = {u: i for i, u in enumerate(order)}
    nbrs = neighbour_sets(G)
    out = {v}
    for path in simple_paths(nbrs, v, r):
        end = path[-1]
        if pos[end] < pos[v] and all(pos[w] > pos[v] for w in path[1:-1]):
            out.add(end)
    return out


def wreach_by_paths(G: Graph, order, v: int, r) -> set[int]:
    """u <= v such that some path of length <= r from v to u has u as its order-minimum."""
    pos = {u: i for i, u in enumerate(order)}
    nbrs = neighbour_sets(G)
    out = {v}
    for path in simple_paths(nbrs, v, r):
        end = path[-1]
        if all(pos[w] >= pos[end] for w in path):
            out.add(end)
    return out


def has_ktt_naive(G: Graph, t: int) -> bool:
    """Try every pair of disjoint t-sets."""
    nbrs = neighbour_sets(G)
    for A in combinations(range(G.n), t):
        common = set(range(G.n))
        for a in A:
            common &= nbrs[a]
        if len(common) < t:
            continue
        rest = [v for v in range(G.n) if v not in A]
        for B in combinations(rest, t):
            if all(b in nbrs[a] for a in A for b in B):
                return True
    return False


def flip_reference(G: Graph, blocks, pairs) -> set[frozenset[int]]:
    """Edge set of the flip, built pair by pair from the definition."""
    blocks = [set(b) for b in blocks]
    edges = {frozenset(e) for e in G.edges}
    where = {v: i for i, b in enumerate(blocks) for v in b}
    wanted = {(min(a, b), max(a, b)) for a, b in pairs}
    out = set()
    for u, v in combinations(range(G.n), 2):
        a, b = where[u], where[v]
        flipped = (min(a, b), max(a, b)) in wanted
        present = frozenset((u, v)) in edges
        if present != flipped:
            out.add(frozenset((u, v)))
    return out


def distance_reference(G: Graph, u: int, v: int):
    nbrs = neighbour_sets(G)
    best = INF
    for path in simple_paths(nbrs, u, INF):
        if path[-1] == v:
            best = min(best, len(path) - 1)
    return best
