"""Small labeled graphs, partitions and flips.

Graphs are immutable and store adjacency as one integer bitmask per vertex,
so vertex sets are plain ints throughout the internals. Public functions
accept any iterable of vertices and return frozensets.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Iterator

from .errors import CapExceeded

INF = math.inf

FlipSpec = frozenset  # frozenset[tuple[int, int]] with i <= j


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_mask(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def from_mask(mask: int) -> frozenset[int]:
    return frozenset(iter_bits(mask))


def parse_radius(value) -> float | int:
    """Accept ints, 'inf' / 'infinity' / '∞' and return an int or ``INF``."""
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        if value == INF:
            return INF
        if value < 0 or value != int(value):
            raise ValueError(f"radius must be a nonnegative integer or inf, got {value!r}")
        return int(value)
    text = str(value).strip().lower()
    if text in ("inf", "infinity", "∞"):
        return INF
    try:
        r = int(text)
    except ValueError:
        raise ValueError(f"radius must be a nonnegative integer or 'inf', got {value!r}") from None
    if r < 0:
        raise ValueError(f"radius must be nonnegative, got {r}")
    return r


def format_radius(r) -> int | str:
    return "inf" if r == INF else int(r)


@dataclass(frozen=True)
class Graph:
    n: int
    adj: tuple[int, ...]

    def __post_init__(self):
        if self.n < 0 or len(self.adj) != self.n:
            raise ValueError("adjacency length must equal n")
        full = (1 << self.n) - 1
        for v, nb in enumerate(self.adj):
            if nb & ~full:
                raise ValueError(f"vertex {v} has a neighbour out of range")
            if nb >> v & 1:
                raise ValueError(f"self-loop at {v}")
            for u in iter_bits(nb):
                if not self.adj[u] >> v & 1:
                    raise ValueError(f"asymmetric adjacency between {u} and {v}")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> Graph:
        adj = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"self-loop at {u}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, tuple(adj))

    @classmethod
    def edgeless(cls, n: int) -> Graph:
        return cls(n, (0,) * n)

    @cached_property
    def edges(self) -> frozenset[tuple[int, int]]:
        return frozenset((u, v) for u in range(self.n) for v in iter_bits(self.adj[u] >> (u + 1) << (u + 1)))

    @property
    def m(self) -> int:
        return sum(nb.bit_count() for nb in self.adj) // 2

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def neighbors(self, v: int) -> frozenset[int]:
        return from_mask(self.adj[v])

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def complement(self) -> Graph:
        full = self.full_mask
        return Graph(self.n, tuple(full & ~nb & ~(1 << v) for v, nb in enumerate(self.adj)))

    def induced(self, vertices: Iterable[int]) -> tuple[Graph, dict[int, int]]:
        """Induced subgraph on ``vertices``, renumbered in ascending order."""
        keep = sorted(set(vertices))
        return induced_mask(self, to_mask(keep)), {v: i for i, v in enumerate(keep)}

    def check_vertex(self, v: int) -> None:
        if not (isinstance(v, int) and 0 <= v < self.n):
            raise ValueError(f"vertex {v!r} out of range for n={self.n}")

    def check_vertices(self, vertices: Iterable[int]) -> int:
        mask = 0
        for v in vertices:
            self.check_vertex(v)
            mask |= 1 << v
        return mask


def induced_mask(G: Graph, keep: int) -> Graph:
    verts = list(iter_bits(keep))
    index = {v: i for i, v in enumerate(verts)}
    adj = []
    for v in verts:
        nb = 0
        for u in iter_bits(G.adj[v] & keep):
            nb |= 1 << index[u]
        adj.append(nb)
    return Graph(len(verts), tuple(adj))


# ---------------------------------------------------------------------------
# partitions


@dataclass(frozen=True)
class Partition:
    """Ordered blocks of a partition of {0..n-1}. Block order matters for FlipSpec indices."""

    n: int
    blocks: tuple[frozenset[int], ...]

    def __post_init__(self):
        seen = 0
        for i, block in enumerate(self.blocks):
            if not block:
                raise ValueError(f"block {i} is empty")
            for v in block:
                if not (0 <= v < self.n):
                    raise ValueError(f"vertex {v} in block {i} out of range for n={self.n}")
                if seen >> v & 1:
                    raise ValueError(f"vertex {v} appears in two blocks")
                seen |= 1 << v
        if seen != (1 << self.n) - 1:
            missing = sorted(from_mask(((1 << self.n) - 1) & ~seen))
            raise ValueError(f"blocks do not cover vertices {missing}")

    @classmethod
    def from_blocks(cls, n: int, blocks: Iterable[Iterable[int]]) -> Partition:
        return cls(n, tuple(frozenset(b) for b in blocks))

    @classmethod
    def whole(cls, n: int) -> Partition:
        return cls(n, (frozenset(range(n)),) if n else ())

    @classmethod
    def singletons(cls, n: int) -> Partition:
        return cls(n, tuple(frozenset([v]) for v in range(n)))

    @classmethod
    def from_labels(cls, labels: list[int]) -> Partition:
        """Blocks grouped by label, ordered by first occurrence."""
        order: dict[int, list[int]] = {}
        for v, lab in enumerate(labels):
            order.setdefault(lab, []).append(v)
        return cls(len(labels), tuple(frozenset(b) for b in order.values()))

    def __len__(self) -> int:
        return len(self.blocks)

    @cached_property
    def masks(self) -> tuple[int, ...]:
        return tuple(to_mask(b) for b in self.blocks)

    @cached_property
    def block_of(self) -> tuple[int, ...]:
        out = [0] * self.n
        for i, b in enumerate(self.blocks):
            for v in b:
                out[v] = i
        return tuple(out)

    @cached_property
    def as_set(self) -> frozenset[frozenset[int]]:
        return frozenset(self.blocks)

    def same_blocks(self, other: Partition) -> bool:
        return self.n == other.n and self.as_set == other.as_set

    def refines(self, other: Partition) -> bool:
        """True if every block of ``self`` lies inside one block of ``other``."""
        if self.n != other.n:
            return False
        owner = other.block_of
        return all(len({owner[v] for v in b}) == 1 for b in self.blocks)

    def parents_in(self, coarser: Partition) -> tuple[int, ...]:
        owner = coarser.block_of
        return tuple(owner[next(iter(b))] for b in self.blocks)

    def restrict(self, keep: Iterable[int]) -> tuple[Partition, dict[int, int]]:
        """Trace on ``keep`` (renumbered ascending) and the old->new block index map."""
        keep = sorted(set(keep))
        index = {v: i for i, v in enumerate(keep)}
        blocks, remap = [], {}
        for i, b in enumerate(self.blocks):
            sub = frozenset(index[v] for v in b if v in index)
            if sub:
                remap[i] = len(blocks)
                blocks.append(sub)
        return Partition(len(keep), tuple(blocks)), remap

    def common_refinement(self, other: Partition) -> Partition:
        labels = [(self.block_of[v], other.block_of[v]) for v in range(self.n)]
        return Partition.from_labels(labels)

    def to_json(self) -> list[list[int]]:
        return [sorted(b) for b in self.blocks]


def flip_spec(pairs: Iterable[tuple[int, int]]) -> frozenset[tuple[int, int]]:
    return frozenset((min(i, j), max(i, j)) for i, j in pairs)


def check_flip_spec(P: Partition, F) -> None:
    for i, j in F:
        if not (0 <= i < len(P) and 0 <= j < len(P)):
            raise ValueError(f"flip pair ({i}, {j}) indexes beyond {len(P)} blocks")


# ---------------------------------------------------------------------------
# flips


def _flip_masks(adj: list[int], a: int, b: int) -> None:
    # uv toggled iff (u in A and v in B) or (u in B and v in A); each unordered pair once
    for u in iter_bits(a | b):
        tog = 0
        if a >> u & 1:
            tog |= b
        if b >> u & 1:
            tog |= a
        adj[u] ^= tog & ~(1 << u)


def flip_pair(G: Graph, A: Iterable[int], B: Iterable[int]) -> Graph:
    """Complement adjacency between A and B (inside A when A == B)."""
    a = G.check_vertices(A)
    b = G.check_vertices(B)
    adj = list(G.adj)
    _flip_masks(adj, a, b)
    return Graph(G.n, tuple(adj))


def apply_pflip(G: Graph, P: Partition, F) -> Graph:
    if P.n != G.n:
        raise ValueError("partition and graph disagree on n")
    check_flip_spec(P, F)
    masks = P.masks
    # pairs of distinct block-pairs touch disjoint vertex pairs, so toggles simply XOR
    toggle = [0] * len(P)
    for i, j in F:
        toggle[i] |= masks[j]
        if i != j:
            toggle[j] |= masks[i]
    adj = list(G.adj)
    for bi, mask in enumerate(masks):
        tog = toggle[bi]
        if tog:
            for u in iter_bits(mask):
                adj[u] ^= tog & ~(1 << u)
    return Graph(G.n, tuple(adj))


def block_pairs(k: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(k) for j in range(i, k)]


def enumerate_pflips(P: Partition, cap: int = 4) -> list[frozenset[tuple[int, int]]]:
    """All 2^(k(k+1)/2) sets of flipped block pairs over the k blocks of P, ordered by subset bitmask."""
    k = len(P)
    if k > cap:
        raise CapExceeded(f"partition has {k} blocks, flip enumeration cap is {cap}")
    pairs = block_pairs(k)
    out = []
    for sel in range(1 << len(pairs)):
        out.append(frozenset(p for idx, p in enumerate(pairs) if sel >> idx & 1))
    return out


def set_partitions(n: int, max_blocks: int) -> Iterator[list[int]]:
    """Restricted growth strings of length n with at most ``max_blocks`` labels."""
    if n == 0:
        yield []
        return
    labels = [0] * n

    def rec(pos, used):
        if pos == n:
            yield list(labels)
            return
        for lab in range(min(used + 1, max_blocks)):
            labels[pos] = lab
            yield from rec(pos + 1, max(used, lab + 1))

    yield from rec(1, 1)


def count_flip_specs(n: int, k: int) -> int:
    total = 0
    for labels in set_partitions(n, k):
        b = max(labels, default=-1) + 1
        total += 1 << (b * (b + 1) // 2)
    return total


def k_flips(G: Graph, k: int, max_specs: int = 4096) -> list[Graph]:
    """Distinct graphs obtainable as a P-flip of G with |P| <= k (deduplicated by edge set)."""
    if k < 1:
        raise ValueError("k must be at least 1")
    specs = count_flip_specs(G.n, k)
    if specs > max_specs:
        raise CapExceeded(f"{specs} flip choices for n={G.n}, k={k} exceeds cap {max_specs}")
    seen: dict[tuple[int, ...], Graph] = {}
    for labels in set_partitions(G.n, k):
        P = Partition.from_labels(labels)
        for F in enumerate_pflips(P, cap=k):
            H = apply_pflip(G, P, F)
            seen.setdefault(H.adj, H)
    return list(seen.values())


# ---------------------------------------------------------------------------
# distances


def bfs_layers(G: Graph, v: int, allowed: int | None = None, limit=INF) -> list[int]:
    """Distance layers (as masks) from v inside the vertex set ``allowed``."""
    if allowed is None:
        allowed = G.full_mask
    adj = G.adj
    frontier = 1 << v
    seen = frontier
    layers = [frontier]
    d = 0
    while frontier and d < limit:
        nb = 0
        for u in iter_bits(frontier):
            nb |= adj[u]
        frontier = nb & allowed & ~seen
        if not frontier:
            break
        seen |= frontier
        layers.append(frontier)
        d += 1
    return layers


def ball_mask(G: Graph, v: int, r, allowed: int | None = None) -> int:
    out = 0
    for layer in bfs_layers(G, v, allowed, r):
        out |= layer
    return out


def ball(G: Graph, v: int, r) -> frozenset[int]:
    G.check_vertex(v)
    return from_mask(ball_mask(G, v, parse_radius(r)))


def distances_from(G: Graph, v: int, allowed: int | None = None) -> list:
    dist = [INF] * G.n
    for d, layer in enumerate(bfs_layers(G, v, allowed)):
        for u in iter_bits(layer):
            dist[u] = d
    return dist


def distance(G: Graph, u: int, v: int):
    G.check_vertex(u)
    G.check_vertex(v)
    return distances_from(G, u)[v]


def all_distances(G: Graph, allowed: int | None = None) -> list[list]:
    """Rows for vertices outside ``allowed`` are left as None."""
    if allowed is None:
        allowed = G.full_mask
    rows: list = [None] * G.n
    for v in iter_bits(allowed):
        rows[v] = distances_from(G, v, allowed)
    return rows


# ---------------------------------------------------------------------------
# deletion and isolation


def delete_vertices(G: Graph, S: Iterable[int]) -> tuple[Graph, dict[int, int]]:
    """G minus S, renumbered; the map sends surviving old indices to new ones."""
    s = G.check_vertices(S)
    return G.induced(v for v in range(G.n) if not s >> v & 1)


def isolate_vertices(G: Graph, S: Iterable[int]) -> Graph:
    s = G.check_vertices(S)
    return Graph(G.n, tuple(0 if s >> v & 1 else nb & ~s for v, nb in enumerate(G.adj)))


def isolation_as_flips(G: Graph, v: int) -> tuple[Partition, frozenset[tuple[int, int]]]:
    """One P-flip over {{v}, N(v), rest} that isolates v (empty blocks are dropped)."""
    G.check_vertex(v)
    nb = G.adj[v]
    rest = G.full_mask & ~nb & ~(1 << v)
    blocks = [frozenset([v])]
    spec = set()
    if nb:
        blocks.append(from_mask(nb))
        spec.add((0, 1))
    if rest:
        blocks.append(from_mask(rest))
    return Partition(G.n, tuple(blocks)), frozenset(spec)


# ---------------------------------------------------------------------------
# bicliques


def find_ktt(G: Graph, t: int, max_n: int = 64, max_t: int = 4):
    """Return disjoint t-sets (A, B) spanning a K_{t,t} subgraph, or None.

    Branch-and-prune over A in descending degree order; a partial A is abandoned
    as soon as its common neighbourhood drops below t vertices.
    """
    if t < 1:
        raise ValueError("t must be positive")
    if G.n > max_n or t > max_t:
        raise CapExceeded(f"K_t,t search capped at n<={max_n}, t<={max_t}")
    adj = G.adj
    cand = sorted((v for v in range(G.n) if adj[v].bit_count() >= t), key=lambda v: (-adj[v].bit_count(), v))

    def rec(start, chosen, common):
        if len(chosen) == t:
            return chosen
        need = t - len(chosen)
        for idx in range(start, len(cand) - need + 1):
            v = cand[idx]
            nc = common & adj[v]
            if nc.bit_count() < t:
                continue
            got = rec(idx + 1, chosen + [v], nc)
            if got:
                return got
        return None

    A = rec(0, [], G.full_mask)
    if A is None:
        return None
    common = G.full_mask
    for v in A:
        common &= adj[v]
    B = list(iter_bits(common))[:t]
    return frozenset(A), frozenset(B)


def is_ktt_free(G: Graph, t: int, **caps) -> tuple[bool, tuple[frozenset[int], frozenset[int]] | None]:
    w = find_ktt(G, t, **caps)
    return (w is None), w


def all_pairs(n: int) -> frozenset[tuple[int, int]]:
    return frozenset(combinations(range(n), 2))
