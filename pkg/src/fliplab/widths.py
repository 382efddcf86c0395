"""Separation-width, strong/weak colouring numbers, degeneracy and tree-width.

All three ordering parameters are computed for a fixed ordering by
``OrderProfile``, which records, for every relevant vertex, the *depth* at
which each reachable vertex is first hit. One breadth-first pass therefore
answers every radius at once.

Downward-closed sets of a total order are exactly its prefixes, so the
separation-width of an ordering is the maximum of |sep_r(v / prefix)| over
prefixes and vertices outside them.
"""
from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass, field
from functools import lru_cache

from .errors import CapExceeded, InvalidWitness
from .graph import INF, Graph, format_radius, from_mask, iter_bits, parse_radius, to_mask

EXACT_CAP = 10
TREEWIDTH_CAP = 12


def check_ordering(G: Graph, order) -> tuple[int, ...]:
    order = tuple(order)
    if sorted(order) != list(range(G.n)):
        raise InvalidWitness(f"ordering {list(order)} is not a permutation of 0..{G.n - 1}")
    return order


def _sep_depths(adj, v: int, S: int) -> list[int]:
    """Depths at which vertices of S are first reached from v through V \\ S."""
    depths = []
    found = 0
    seen = frontier = 1 << v
    d = 0
    while frontier:
        d += 1
        nb = 0
        for u in iter_bits(frontier):
            nb |= adj[u]
        hit = nb & S & ~found
        if hit:
            found |= hit
            depths.extend([d] * hit.bit_count())
        frontier = nb & ~S & ~seen
        seen |= frontier
    return depths


def sep_set(G: Graph, v: int, S, r) -> frozenset[int]:
    """Vertices of S reachable from v by a path of length <= r with no inner vertex in S."""
    r = parse_radius(r)
    G.check_vertex(v)
    s = G.check_vertices(S)
    if s >> v & 1:
        raise ValueError(f"vertex {v} lies in S")
    adj = G.adj
    found = 0
    seen = frontier = 1 << v
    d = 0
    while frontier and d < r:
        d += 1
        nb = 0
        for u in iter_bits(frontier):
            nb |= adj[u]
        found |= nb & s
        frontier = nb & ~s & ~seen
        seen |= frontier
    return from_mask(found)


@lru_cache(maxsize=1 << 18)
def _prefix_table(G: Graph, S: int) -> tuple:
    """For each v outside S, the sorted separator depths of v into S (None for v in S)."""
    return tuple(None if S >> v & 1 else tuple(sorted(_sep_depths(G.adj, v, S))) for v in range(G.n))


def _count(depths, r) -> int:
    return bisect_right(depths, r)


def _prefix_cost(G: Graph, S: int, r) -> int:
    best = 0
    for depths in _prefix_table(G, S):
        if depths:
            c = bisect_right(depths, r)
            if c > best:
                best = c
    return best


@lru_cache(maxsize=1 << 18)
def _free_ball(G: Graph, S: int, u: int, r) -> int:
    """Ball of radius r around u inside G - S."""
    adj = G.adj
    seen = frontier = 1 << u
    d = 0
    while frontier and d < r:
        d += 1
        nb = 0
        for w in iter_bits(frontier):
            nb |= adj[w]
        frontier = nb & ~S & ~seen
        seen |= frontier
    return seen


class OrderProfile:
    """Depth data of one ordering, from which scol/sw/wcol follow for any radius."""

    def __init__(self, G: Graph, order):
        self.G = G
        self.order = check_ordering(G, order)
        n = G.n
        adj = G.adj
        pos = [0] * n
        for i, v in enumerate(self.order):
            pos[v] = i
        self.pos = pos
        prefix = [0] * (n + 1)
        for i, v in enumerate(self.order):
            prefix[i + 1] = prefix[i] | (1 << v)
        self.prefix = prefix

        # strong reach: vertices before v reached through vertices after v
        self.sreach_depths = []
        for i, v in enumerate(self.order):
            self.sreach_depths.append(sorted(_sep_depths(adj, v, prefix[i])))

        # separators into every proper prefix, per vertex outside it
        self.sep_depths: dict[int, list] = {v: [] for v in range(n)}
        for i in range(1, n):
            table = _prefix_table(G, prefix[i])
            for v in self.order[i:]:
                self.sep_depths[v].append(table[v])

        # weak reach: u reaches v weakly iff v is within the ball of u in G[>= u]
        wdepth: list[list[int]] = [[] for _ in range(n)]
        for i, u in enumerate(self.order):
            blocked = prefix[i]
            seen = frontier = 1 << u
            wdepth[u].append(0)
            d = 0
            while frontier:
                d += 1
                nb = 0
                for w in iter_bits(frontier):
                    nb |= adj[w]
                frontier = nb & ~blocked & ~seen
                seen |= frontier
                for w in iter_bits(frontier):
                    wdepth[w].append(d)
        self.wreach_depths = [sorted(x) for x in wdepth]

    def scol_profile(self, r) -> dict[int, int]:
        return {v: _count(self.sreach_depths[i], r) + 1 for i, v in enumerate(self.order)}

    def wcol_profile(self, r) -> dict[int, int]:
        return {v: _count(self.wreach_depths[v], r) for v in range(self.G.n)}

    def sw_profile(self, r) -> dict[int, int]:
        return {v: max((_count(d, r) for d in self.sep_depths[v]), default=0) for v in range(self.G.n)}

    def scol(self, r) -> int:
        return max(self.scol_profile(r).values(), default=0)

    def wcol(self, r) -> int:
        return max(self.wcol_profile(r).values(), default=0)

    def sw(self, r) -> int:
        return max(self.sw_profile(r).values(), default=0)


def sreach(G: Graph, order, v: int, r) -> frozenset[int]:
    """Strongly r-reachable set of v, including v itself."""
    r = parse_radius(r)
    order = check_ordering(G, order)
    pos = {u: i for i, u in enumerate(order)}
    earlier = to_mask(u for u in order[: pos[v]])
    return sep_set(G, v, from_mask(earlier), r) | {v}


def wreach(G: Graph, order, v: int, r) -> frozenset[int]:
    """Weakly r-reachable set of v, including v itself."""
    r = parse_radius(r)
    order = check_ordering(G, order)
    pos = {u: i for i, u in enumerate(order)}
    out = set()
    for u in order[: pos[v] + 1]:
        below = to_mask(order[: pos[u]])
        if _free_ball(G, below, u, r) >> v & 1:
            out.add(u)
    return frozenset(out)


@dataclass
class WidthResult:
    param: str
    r: object
    value: int
    order: tuple[int, ...] | None
    exact: bool
    profile: dict[int, int] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "param": self.param,
            "r": format_radius(self.r),
            "value": self.value,
            "exact": self.exact,
            "order": list(self.order) if self.order is not None else None,
        }


def _of_order(param: str, G: Graph, order, r) -> WidthResult:
    r = parse_radius(r)
    prof = OrderProfile(G, order)
    profile = getattr(prof, f"{param}_profile")(r)
    return WidthResult(param, r, max(profile.values(), default=0), prof.order, False, profile)


def scol_of_order(G: Graph, order, r) -> WidthResult:
    return _of_order("scol", G, order, r)


def wcol_of_order(G: Graph, order, r) -> WidthResult:
    return _of_order("wcol", G, order, r)


def sw_of_order(G: Graph, order, r) -> WidthResult:
    return _of_order("sw", G, order, r)


# ---------------------------------------------------------------------------
# heuristics and exact search


def degeneracy(G: Graph) -> tuple[int, tuple[int, ...]]:
    """Degeneracy via minimum-degree removal; the witness is the removal order reversed."""
    alive = G.full_mask
    removal = []
    value = 0
    while alive:
        v = min(iter_bits(alive), key=lambda u: ((G.adj[u] & alive).bit_count(), u))
        value = max(value, (G.adj[v] & alive).bit_count())
        removal.append(v)
        alive &= ~(1 << v)
    return value, tuple(reversed(removal))


def sw_greedy(G: Graph, r) -> WidthResult:
    """Append, at each step, the vertex whose addition minimises the separator cost of the new prefix."""
    r = parse_radius(r)
    S = 0
    order = []
    for _ in range(G.n):
        v = min((u for u in range(G.n) if not S >> u & 1), key=lambda u: (_prefix_cost(G, S | 1 << u, r), u))
        order.append(v)
        S |= 1 << v
    res = sw_of_order(G, order, r)
    return res


def _check_cap(G: Graph, cap: int) -> None:
    if G.n > cap:
        raise CapExceeded(f"exact search capped at n <= {cap} (got n={G.n}); use the greedy variant")


def _prefix_bnb(n: int, step_cost, best_value: int, best_order) -> tuple[int, tuple[int, ...]]:
    """Minimise max step cost over orderings when a step's cost depends only on (prefix set, vertex).

    Depth-first over prefixes, smallest vertex first; a branch is cut once its
    running maximum reaches the incumbent, or when the same prefix set was
    already reached with a running maximum no larger.
    """
    full = (1 << n) - 1
    best = [best_value, tuple(best_order)]
    seen: dict[int, int] = {}
    order: list[int] = []

    def dfs(S, partial):
        if S == full:
            if partial < best[0]:
                best[0], best[1] = partial, tuple(order)
            return
        for v in range(n):
            if S >> v & 1:
                continue
            c = step_cost(S, v)
            if c < partial:
                c = partial
            if c >= best[0]:
                continue
            S2 = S | (1 << v)
            if seen.get(S2, INF) <= c:
                continue
            seen[S2] = c
            order.append(v)
            dfs(S2, c)
            order.pop()

    dfs(0, 0)
    return best[0], best[1]


def sw_exact(G: Graph, r, cap: int = EXACT_CAP) -> WidthResult:
    r = parse_radius(r)
    _check_cap(G, cap)
    start = sw_greedy(G, r)
    value, order = _prefix_bnb(G.n, lambda S, v: _prefix_cost(G, S | 1 << v, r), start.value, start.order)
    res = sw_of_order(G, order, r)
    assert res.value == value
    res.exact = True
    return res


def scol_exact(G: Graph, r, cap: int = EXACT_CAP) -> WidthResult:
    r = parse_radius(r)
    _check_cap(G, cap)
    candidates = [degeneracy(G)[1], sw_greedy(G, r).order]
    start = min((scol_of_order(G, o, r) for o in candidates), key=lambda w: w.value)

    def cost(S, v):
        return _count(_prefix_table(G, S)[v], r) + 1

    value, order = _prefix_bnb(G.n, cost, start.value, start.order)
    res = scol_of_order(G, order, r)
    assert res.value == value
    res.exact = True
    return res


def wcol_exact(G: Graph, r, cap: int = EXACT_CAP) -> WidthResult:
    """Branch-and-bound over orderings for the weak colouring number.

    Placing u after the prefix S puts u into the weak reach of every vertex in
    the r-ball of u inside G - S, so the search carries a count per vertex. A
    vertex still to be placed will end with at least its current count + 1.
    """
    r = parse_radius(r)
    _check_cap(G, cap)
    n = G.n
    candidates = [degeneracy(G)[1], sw_greedy(G, r).order, scol_exact(G, r, cap).order]
    start = min((wcol_of_order(G, o, r) for o in candidates), key=lambda w: w.value)
    best = [start.value, start.order]
    full = (1 << n) - 1
    counts = [0] * n
    order: list[int] = []
    seen: dict = {}

    def dfs(S, partial):
        if S == full:
            if partial < best[0]:
                best[0], best[1] = partial, tuple(order)
            return
        rest = full & ~S
        for u in iter_bits(rest):
            ball = _free_ball(G, S, u, r)
            for w in iter_bits(ball):
                counts[w] += 1
            c = partial if partial > counts[u] else counts[u]
            S2 = S | (1 << u)
            rest2 = rest & ~(1 << u)
            lb = c
            for w in iter_bits(rest2):
                if counts[w] + 1 > lb:
                    lb = counts[w] + 1
            if lb < best[0]:
                key = (S2, tuple(counts[w] for w in iter_bits(rest2)))
                if seen.get(key, INF) > c:
                    seen[key] = c
                    order.append(u)
                    dfs(S2, c)
                    order.pop()
            for w in iter_bits(ball):
                counts[w] -= 1

    dfs(0, 0)
    res = wcol_of_order(G, best[1], r)
    assert res.value == best[0]
    res.exact = True
    return res


def _elimination_frontier(G: Graph, S: int, v: int) -> int:
    """Vertices outside S + v joined to v by a path whose inner vertices all lie in S."""
    adj = G.adj
    seen = frontier = 1 << v
    out = 0
    while frontier:
        nb = 0
        for u in iter_bits(frontier):
            nb |= adj[u]
        out |= nb & ~S & ~(1 << v)
        frontier = nb & S & ~seen
        seen |= frontier
    return out


def treewidth_oracle(G: Graph, cap: int = TREEWIDTH_CAP) -> int:
    """Exact tree-width by dynamic programming over eliminated vertex sets.

    TW(S) = min over v in S of max(TW(S - v), |Q(S - v, v)|), where Q(S, v) is
    the set of uneliminated vertices v reaches through eliminated ones.
    """
    if G.n > cap:
        raise CapExceeded(f"tree-width oracle capped at n <= {cap}")
    if G.n == 0:
        return 0
    full = G.full_mask
    tw = [0] * (full + 1)
    tw[0] = -1
    for S in range(1, full + 1):
        best = G.n
        for v in iter_bits(S):
            rest = S & ~(1 << v)
            val = max(tw[rest], _elimination_frontier(G, rest, v).bit_count())
            if val < best:
                best = val
        tw[S] = best
    return tw[full]


# ---------------------------------------------------------------------------
# sandwich checks


@dataclass
class SandwichReport:
    r: object
    per_order: dict
    exact: dict | None
    failures: list

    @property
    def ok(self) -> bool:
        return not self.failures


def _double_minus_one(r):
    return INF if r == INF else 2 * r - 1


def _chain_failures(tag: str, scol, sw, wcol, scol2) -> list[str]:
    out = []
    if not scol <= sw + 1:
        out.append(f"{tag}: scol_r={scol} > sw_r+1={sw + 1}")
    if not sw + 1 <= wcol:
        out.append(f"{tag}: sw_r+1={sw + 1} > wcol_r={wcol}")
    if not sw + 1 <= scol2:
        out.append(f"{tag}: sw_r+1={sw + 1} > scol_(2r-1)={scol2}")
    return out


def check_sandwich(G: Graph, order, r, exact_cap: int = EXACT_CAP, profile: OrderProfile | None = None) -> SandwichReport:
    """scol_r <= sw_r + 1 <= wcol_r and sw_r + 1 <= scol_(2r-1), per ordering and (small n) exactly."""
    r = parse_radius(r)
    if r < 1:
        raise ValueError("sandwich inequalities need r >= 1")
    prof = profile or OrderProfile(G, order)
    r2 = _double_minus_one(r)
    per = {"scol": prof.scol(r), "sw": prof.sw(r), "wcol": prof.wcol(r), "scol2": prof.scol(r2)}
    failures = _chain_failures("order", per["scol"], per["sw"], per["wcol"], per["scol2"])
    exact = None
    if G.n <= exact_cap:
        exact = exact_values(G, r, exact_cap)
        failures += _chain_failures("exact", exact["scol"], exact["sw"], exact["wcol"], exact["scol2"])
    return SandwichReport(r, per, exact, failures)


def exact_values(G: Graph, r, cap: int = EXACT_CAP) -> dict:
    r2 = _double_minus_one(r)
    return {
        "scol": scol_exact(G, r, cap).value,
        "sw": sw_exact(G, r, cap).value,
        "wcol": wcol_exact(G, r, cap).value,
        "scol2": scol_exact(G, r2, cap).value,
    }
