"""Flipper-rank and splitter-rank on tiny graphs.

Both ranks are 1 on K1 and otherwise 1 + min over moves of max over v of the
rank of the radius-r ball around v, renumbered. A move that changes nothing
makes the recursion cyclic, so the value is computed as a least fixpoint over
every graph reachable from the input; graphs on which no move ever shrinks
anything get rank infinity.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from itertools import combinations

from .errors import CapExceeded
from .graph import INF, Graph, ball_mask, format_radius, induced_mask, k_flips, parse_radius
from .sparsify import require_ktt_free

FRK_MAX_N = 6
FRK_MAX_SPECS = 4096
SRK_MAX_N = 7

Key = tuple  # (n, adj) of a renumbered graph

_memo: dict[tuple, dict[Key, float]] = {}
_lock = threading.Lock()


def _key(G: Graph) -> Key:
    return (G.n, G.adj)


def _balls(H: Graph, r) -> frozenset[Key]:
    return frozenset(_key(induced_mask(H, ball_mask(H, v, r))) for v in range(H.n))


def _flip_moves(r, k: int, max_specs: int):
    def moves(G: Graph):
        return {_balls(H, r) for H in k_flips(G, k, max_specs)}
    return moves


def _deletion_moves(r, k: int):
    def moves(G: Graph):
        out = set()
        for size in range(min(k, G.n - 1) + 1):
            for S in combinations(range(G.n), size):
                keep = G.full_mask & ~sum(1 << v for v in S)
                out.add(_balls(induced_mask(G, keep), r))
        return out
    return moves


def _solve(G: Graph, table: dict[Key, float], moves) -> float:
    """Least fixpoint of rank = 1 + min_move max_ball rank over the unsolved closure of G."""
    root = _key(G)
    if root in table:
        return table[root]
    graphs = {root: G}
    options: dict[Key, list[frozenset[Key]]] = {}
    stack = [root]
    while stack:
        key = stack.pop()
        H = graphs[key]
        if H.n == 1:
            options[key] = []
            continue
        opts = list(moves(H))
        options[key] = opts
        for opt in opts:
            for child in opt:
                if child not in graphs and child not in table:
                    n, adj = child
                    graphs[child] = Graph(n, adj)
                    stack.append(child)
    val = {key: (1 if graphs[key].n == 1 else INF) for key in options}

    def lookup(child):
        return table[child] if child in table else val[child]

    changed = True
    while changed:
        changed = False
        for key, opts in options.items():
            if not opts:
                continue
            best = min(max(lookup(c) for c in opt) for opt in opts)
            if 1 + best < val[key]:
                val[key] = 1 + best
                changed = True
    with _lock:
        for key, v in val.items():
            table.setdefault(key, v)
    return val[root]


def frk(G: Graph, r, k: int, max_n: int = FRK_MAX_N, max_specs: int = FRK_MAX_SPECS) -> float:
    """Flipper-rank: moves are k-flips (identity included), then restriction to each r-ball."""
    r = parse_radius(r)
    if G.n == 0:
        raise ValueError("rank of the empty graph is undefined")
    if G.n > max_n:
        raise CapExceeded(f"flipper-rank limited to n <= {max_n} (got {G.n})")
    table = _memo.setdefault(("frk", r, k), {})
    return _solve(G, table, _flip_moves(r, k, max_specs))


def srk(G: Graph, r, k: int, max_n: int = SRK_MAX_N) -> float:
    """Splitter-rank: moves delete at most k vertices (at least one vertex must survive)."""
    r = parse_radius(r)
    if G.n == 0:
        raise ValueError("rank of the empty graph is undefined")
    if G.n > max_n:
        raise CapExceeded(f"splitter-rank limited to n <= {max_n} (got {G.n})")
    if k < 0:
        raise ValueError("k must be nonnegative")
    table = _memo.setdefault(("srk", r, min(k, G.n)), {})
    return _solve(G, table, _deletion_moves(r, k))


def clear_memo() -> None:
    with _lock:
        _memo.clear()


def lemma_budget(k: int, t: int, ell: int) -> int:
    """k^(2^ell) * t^2, computed exactly (tiny inputs only ever reach small ell)."""
    return k ** (2 ** ell) * t * t


@dataclass
class FrkReport:
    t: int
    r: object
    k: int
    n: int
    ell: float
    kprime: int | None
    srk_value: float | None

    @property
    def saturated(self) -> bool:
        return not self.vacuous and (self.kprime is None or self.kprime >= self.n)

    @property
    def vacuous(self) -> bool:
        return self.ell == INF

    @property
    def holds(self) -> bool:
        return self.vacuous or self.srk_value <= self.ell

    def to_json(self) -> dict:
        def num(x):
            return "inf" if x == INF else x
        return {
            "schema": 1, "t": self.t, "r": format_radius(self.r), "k": self.k,
            "frk": num(self.ell), "ell": num(self.ell), "kprime": self.kprime,
            "srk": num(self.srk_value), "saturated": self.saturated, "vacuous": self.vacuous,
            "holds": self.holds,
        }


def check_lemma_frk(G: Graph, t: int, r, k: int) -> FrkReport:
    """frk at radius 3r with budget k bounds srk at radius r with budget k^(2^ell) t^2 (capped at n)."""
    r = parse_radius(r)
    require_ktt_free(G, t)
    ell = frk(G, 3 * r, k)
    if ell == INF:
        return FrkReport(t, r, k, G.n, ell, None, None)
    # k^(2^ell) has 2^ell * log2(k) bits; past 2^6 doublings only saturation matters
    kprime = lemma_budget(k, t, ell) if k == 1 or ell <= 6 else None
    budget = G.n if kprime is None else min(kprime, G.n)
    return FrkReport(t, r, k, G.n, ell, kprime, srk(G, r, budget))
