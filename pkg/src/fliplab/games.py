"""Speed-r cops and robber, the order-based monotone cop strategy, and tiny exact game solvers.

Rules implemented by the referee: before round 1 the robber picks w0 and the
cop set is empty. In round i the cops announce C_i (at most k vertices); the
robber then walks at most r edges from w_{i-1}, never touching a vertex of
C_i & C_{i-1}; he is caught if he stops on a vertex of C_i.

Strategies are callables. A cop strategy receives the history (a list of
``Round``) and returns a vertex set. A robber strategy receives the history
and the announced cop set, or ``None`` before the game starts, and returns
the start vertex or a path beginning at his current position.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Callable

from .errors import CapExceeded, InvalidWitness
from .graph import (
    Graph,
    ball_mask,
    format_radius,
    from_mask,
    iter_bits,
    k_flips,
    parse_radius,
    to_mask,
)
from .sparsify import require_ktt_free
from .widths import check_ordering, sep_set, sw_of_order

COP, ROBBER, TIMEOUT = "cop", "robber", "timeout"
CERTIFY_MAX_N = 10
COPWIDTH_MAX_SETS = sum(comb(8, j) for j in range(4))
FLIPPER_MAX_SPECS = 4096


@dataclass(frozen=True)
class Round:
    cops: frozenset[int]
    path: tuple[int, ...]

    @property
    def pos(self) -> int:
        return self.path[-1]


@dataclass
class GameTranscript:
    n: int
    r: object
    k: int
    rounds: list[Round] = field(default_factory=list)
    winner: str | None = None
    reason: str = ""
    edges: tuple = ()

    def to_jsonl(self) -> str:
        lines = [{
            "schema": 1, "kind": "header", "n": self.n, "r": format_radius(self.r), "k": self.k,
            "edges": [list(e) for e in self.edges],
        }]
        for i, rd in enumerate(self.rounds):
            lines.append({"kind": "round", "i": i, "cops": sorted(rd.cops), "path": list(rd.path), "pos": rd.pos})
        lines.append({"kind": "result", "winner": self.winner, "reason": self.reason})
        return "".join(json.dumps(x) + "\n" for x in lines)

    @classmethod
    def from_jsonl(cls, text: str) -> GameTranscript:
        rows = [json.loads(ln) for ln in text.splitlines() if ln.strip()]
        if not rows or rows[0].get("kind") != "header":
            raise InvalidWitness("transcript must start with a header line")
        h = rows[0]
        tr = cls(h["n"], parse_radius(h["r"]), h["k"], edges=tuple(tuple(e) for e in h.get("edges", [])))
        for row in rows[1:]:
            if row["kind"] == "round":
                if not row["path"] or row["path"][-1] != row["pos"]:
                    raise InvalidWitness(f"round {row.get('i')}: position does not end the path")
                tr.rounds.append(Round(frozenset(row["cops"]), tuple(row["path"])))
            elif row["kind"] == "result":
                tr.winner, tr.reason = row["winner"], row.get("reason", "")
        return tr


def shortest_path(G: Graph, src: int, dst: int, allowed: int) -> tuple[int, ...]:
    parent = {src: None}
    frontier = [src]
    while frontier and dst not in parent:
        nxt = []
        for u in frontier:
            for w in iter_bits(G.adj[u] & allowed):
                if w not in parent:
                    parent[w] = u
                    nxt.append(w)
        frontier = nxt
    if dst not in parent:
        raise ValueError(f"{dst} unreachable from {src}")
    path = [dst]
    while parent[path[-1]] is not None:
        path.append(parent[path[-1]])
    return tuple(reversed(path))


def robber_options(G: Graph, r, prev_cops: frozenset, cops: frozenset, pos: int) -> int:
    """Mask of every legal stopping vertex (including capture squares)."""
    blocked = to_mask(prev_cops & cops)
    return ball_mask(G, pos, r, G.full_mask & ~blocked)


def judge_cops(G: Graph, k: int, cops) -> str | None:
    try:
        cops = frozenset(cops)
    except TypeError:
        return "cop move is not a vertex set"
    if len(cops) > k:
        return f"{len(cops)} cops exceeds width {k}"
    if any(not isinstance(c, int) or not 0 <= c < G.n for c in cops):
        return "cop on a non-vertex"
    return None


def judge_path(G: Graph, r, prev_cops: frozenset, cops: frozenset, start: int, path) -> str | None:
    path = tuple(path)
    if not path or path[0] != start:
        return "robber path must start at his position"
    if any(not isinstance(v, int) or not 0 <= v < G.n for v in path):
        return "robber path leaves the graph"
    if len(path) - 1 > r:
        return f"robber path of length {len(path) - 1} exceeds speed {format_radius(r)}"
    for a, b in zip(path, path[1:]):
        if not G.has_edge(a, b):
            return f"robber path uses non-edge ({a}, {b})"
    stationary = prev_cops & cops
    if any(v in stationary for v in path):
        return "robber path crosses a stationary cop"
    return None


def play_game(G: Graph, r, k: int, cop_strategy: Callable, robber_strategy: Callable,
              max_rounds: int | None = None) -> GameTranscript:
    r = parse_radius(r)
    if max_rounds is None:
        max_rounds = 4 * G.n
    tr = GameTranscript(G.n, r, k, edges=tuple(sorted(G.edges)))
    if G.n == 0:
        tr.winner, tr.reason = COP, "empty graph"
        return tr
    start = robber_strategy([], None)
    if not isinstance(start, int) or not 0 <= start < G.n:
        tr.winner, tr.reason = COP, "illegal robber start"
        return tr
    tr.rounds.append(Round(frozenset(), (start,)))
    for _ in range(max_rounds):
        prev = tr.rounds[-1]
        cops = cop_strategy(list(tr.rounds))
        bad = judge_cops(G, k, cops)
        if bad:
            tr.winner, tr.reason = ROBBER, f"illegal cop move: {bad}"
            return tr
        cops = frozenset(cops)
        path = tuple(robber_strategy(list(tr.rounds), cops))
        bad = judge_path(G, r, prev.cops, cops, prev.pos, path)
        if bad:
            tr.rounds.append(Round(cops, path or (prev.pos,)))
            tr.winner, tr.reason = COP, f"illegal robber move: {bad}"
            return tr
        tr.rounds.append(Round(cops, path))
        if path[-1] in cops:
            tr.winner, tr.reason = COP, f"robber caught at {path[-1]}"
            return tr
    tr.winner, tr.reason = TIMEOUT, f"no capture in {max_rounds} rounds"
    return tr


@dataclass
class TranscriptCheck:
    ok: bool
    round: int | None = None
    reason: str = ""


def validate_transcript(G: Graph, tr: GameTranscript) -> TranscriptCheck:
    """Replay a transcript against the rules, ignoring how it was produced."""
    if tr.n != G.n:
        return TranscriptCheck(False, None, "vertex count mismatch")
    if tr.edges and set(map(tuple, tr.edges)) != set(G.edges):
        return TranscriptCheck(False, None, "transcript recorded for a different graph")
    if not tr.rounds:
        return TranscriptCheck(tr.winner == COP, None, "no rounds")
    first = tr.rounds[0]
    if first.cops or len(first.path) != 1 or not 0 <= first.pos < G.n:
        return TranscriptCheck(False, 0, "round 0 must be a lone robber placement")
    for i in range(1, len(tr.rounds)):
        prev, cur = tr.rounds[i - 1], tr.rounds[i]
        if prev.pos in prev.cops:
            return TranscriptCheck(False, i, "game continued after a capture")
        last = i == len(tr.rounds) - 1
        bad = judge_cops(G, tr.k, cur.cops)
        if bad:
            return TranscriptCheck(False, i, bad)
        bad = judge_path(G, tr.r, prev.cops, cur.cops, prev.pos, cur.path)
        if bad:
            if last and tr.winner == COP and tr.reason.startswith("illegal robber move"):
                return TranscriptCheck(True)
            return TranscriptCheck(False, i, bad)
    caught = tr.rounds[-1].pos in tr.rounds[-1].cops and len(tr.rounds) > 1
    if caught and tr.winner != COP:
        return TranscriptCheck(False, len(tr.rounds) - 1, "capture not recorded as a cop win")
    if not caught and tr.winner == COP and not tr.reason.startswith("illegal"):
        return TranscriptCheck(False, len(tr.rounds) - 1, "cop win recorded without a capture")
    return TranscriptCheck(True)


# ---------------------------------------------------------------------------
# strategies


class MonotoneCops:
    """C_i = sep_{2r}(w_{i-1} / {v_1..v_{i-1}}) plus v_i, for the given ordering."""

    positional = True

    def __init__(self, G: Graph, r, order, include_new_vertex: bool = True):
        self.G = G
        self.r = parse_radius(r)
        self.order = check_ordering(G, order)
        self.include_new_vertex = include_new_vertex
        self._cache: dict[tuple[int, int], frozenset[int]] = {}

    def prefix(self, i: int) -> frozenset[int]:
        return frozenset(self.order[:i])

    def __call__(self, history) -> frozenset[int]:
        i = len(history)
        w = history[-1].pos
        key = (i, w)
        if key not in self._cache:
            self._cache[key] = self._choose(i, w)
        return self._cache[key]

    def _choose(self, i: int, w: int) -> frozenset[int]:
        if i > self.G.n:
            return frozenset()
        S = self.prefix(i - 1)
        if w in S:
            # only reachable when the strategy is deliberately weakened
            return frozenset()
        cops = set(sep_set(self.G, w, S, 2 * self.r))
        if self.include_new_vertex:
            cops.add(self.order[i - 1])
        return frozenset(cops)


def monotone_cop_strategy(G: Graph, r, order, include_new_vertex: bool = True) -> MonotoneCops:
    return MonotoneCops(G, r, order, include_new_vertex)


def idle_cops(history) -> frozenset[int]:
    return frozenset()


class GreedyRobber:
    """Stops at the reachable cop-free vertex farthest from the announced cops; ties to the smallest index."""

    def __init__(self, G: Graph, r, start: int = 0):
        self.G, self.r, self.start = G, parse_radius(r), start

    def __call__(self, history, cops):
        if cops is None:
            return self.start
        prev = history[-1]
        opts = robber_options(self.G, self.r, prev.cops, cops, prev.pos)
        free = opts & ~to_mask(cops)
        target = _farthest(self.G, free or opts, cops)
        blocked = to_mask(prev.cops & cops)
        return shortest_path(self.G, prev.pos, target, self.G.full_mask & ~blocked)


class RandomRobber:
    def __init__(self, G: Graph, r, seed: int):
        self.G, self.r, self.rng = G, parse_radius(r), random.Random(seed)

    def __call__(self, history, cops):
        if cops is None:
            return self.rng.randrange(self.G.n)
        prev = history[-1]
        opts = robber_options(self.G, self.r, prev.cops, cops, prev.pos)
        free = list(iter_bits(opts & ~to_mask(cops))) or list(iter_bits(opts))
        target = self.rng.choice(free)
        blocked = to_mask(prev.cops & cops)
        return shortest_path(self.G, prev.pos, target, self.G.full_mask & ~blocked)


def _farthest(G: Graph, candidates: int, cops) -> int:
    if not cops:
        return min(iter_bits(candidates))
    dist = {}
    layers = []
    # multi-source BFS from the cop set
    seen = frontier = to_mask(cops)
    while frontier:
        layers.append(frontier)
        nb = 0
        for u in iter_bits(frontier):
            nb |= G.adj[u]
        frontier = nb & ~seen
        seen |= frontier
    for d, layer in enumerate(layers):
        for v in iter_bits(layer):
            dist[v] = d
    return max(iter_bits(candidates), key=lambda v: (dist.get(v, G.n + 1), -v))


# ---------------------------------------------------------------------------
# exhaustive certification against every robber


@dataclass
class Certification:
    certified: bool
    counter: GameTranscript | None = None
    violation: str | None = None
    nodes: int = 0
    leaves: int = 0
    max_round: int = 0
    max_cops: int = 0

    def to_json(self) -> dict:
        return {
            "schema": 1, "certified": self.certified, "violation": self.violation,
            "nodes": self.nodes, "games": self.leaves, "max_round": self.max_round, "max_cops": self.max_cops,
            "counter": None if self.counter is None else [
                {"cops": sorted(rd.cops), "path": list(rd.path)} for rd in self.counter.rounds
            ],
        }


Invariant = Callable[[list, frozenset, int], "str | None"]


def adversarial_robber_certify(G: Graph, r, cop_strategy: Callable, k: int, max_rounds: int | None = None,
                               invariant: Invariant | None = None, max_n: int = CERTIFY_MAX_N) -> Certification:
    """Play the cop strategy against every robber; True iff every branch is caught within ``max_rounds``.

    The robber branches over all stopping vertices; ``invariant(history,
    cops, reach)`` additionally sees the mask of every vertex some legal path
    can touch, so path-based invariants cover all paths, not just the
    representative one recorded in the transcript.
    """
    r = parse_radius(r)
    if G.n > max_n:
        raise CapExceeded(f"certification limited to n <= {max_n} (got {G.n})")
    if max_rounds is None:
        max_rounds = G.n
    result = Certification(True)
    edges = tuple(sorted(G.edges))

    def fail(history, why, winner=ROBBER):
        result.certified = False
        result.violation = why
        result.counter = GameTranscript(G.n, r, k, list(history), winner, why, edges)

    def explore(history) -> bool:
        result.nodes += 1
        rnd = len(history)
        if rnd > max_rounds:
            fail(history, f"robber survives {max_rounds} rounds", TIMEOUT)
            return False
        prev = history[-1]
        cops = cop_strategy(list(history))
        bad = judge_cops(G, k, cops)
        if bad:
            fail(history, f"illegal cop move: {bad}")
            return False
        cops = frozenset(cops)
        result.max_cops = max(result.max_cops, len(cops))
        allowed = G.full_mask & ~to_mask(prev.cops & cops)
        reach = ball_mask(G, prev.pos, r, allowed)
        if invariant is not None:
            why = invariant(history, cops, reach)
            if why:
                # the legal history so far, scored against the strategy whose guarantee broke
                fail(history, f"invariant violated: {why}")
                return False
        escapes = reach & ~to_mask(cops)
        if not escapes:
            result.leaves += 1
            result.max_round = max(result.max_round, rnd)
            return True
        for w in iter_bits(escapes):
            step = Round(cops, shortest_path(G, prev.pos, w, allowed))
            if not explore(history + [step]):
                return False
        return True

    for w0 in range(G.n):
        if not explore([Round(frozenset(), (w0,))]):
            return result
    return result


@dataclass
class MonotoneCertificate:
    order: tuple[int, ...]
    r: object
    budget: int
    certification: Certification

    @property
    def ok(self) -> bool:
        return self.certification.certified

    def to_json(self) -> dict:
        return {
            "order": list(self.order), "r": format_radius(self.r), "budget": self.budget,
            **self.certification.to_json(),
        }


def certify_monotone(G: Graph, r, order, include_new_vertex: bool = True, max_n: int = CERTIFY_MAX_N) -> MonotoneCertificate:
    """Certify the order-based strategy with budget sw_{2r}(order)+1 and its structural invariants.

    Checked at every node of the game tree: the robber can only touch vertices
    outside {v_1..v_{i-1}}; his position never sits on a vertex some earlier
    round occupied; the cop count stays within budget; capture within n rounds.
    """
    r = parse_radius(r)
    strategy = MonotoneCops(G, r, order, include_new_vertex)
    budget = sw_of_order(G, strategy.order, 2 * r).value + 1 if G.n else 1

    def invariant(history, cops, reach):
        i = len(history)
        if len(cops) > budget:
            return f"round {i} uses {len(cops)} cops, budget {budget}"
        prefix = to_mask(strategy.order[:i - 1])
        if reach & prefix:
            return f"round {i}: robber can reach the claimed prefix at {sorted(from_mask(reach & prefix))}"
        earlier = 0
        for rd in history[:-1]:
            earlier |= to_mask(rd.cops)
        if history[-1].pos in from_mask(earlier):
            return f"round {i - 1}: robber stands on a previously occupied vertex"
        return None

    cert = adversarial_robber_certify(G, r, strategy, max(budget, 1), G.n, invariant, max_n)
    return MonotoneCertificate(strategy.order, r, budget, cert)


# ---------------------------------------------------------------------------
# exact solvers


def copwidth_exact(G: Graph, r, k: int, max_sets: int = COPWIDTH_MAX_SETS) -> bool:
    """Do k cops win the radius-r game? Least fixpoint over (previous cop set, robber vertex)."""
    r = parse_radius(r)
    n = G.n
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k >= n:
        return True
    sets = [to_mask(c) for j in range(k + 1) for c in combinations(range(n), j)]
    if len(sets) > max_sets:
        raise CapExceeded(f"{len(sets)} cop placements exceeds cap {max_sets}")
    index = {c: i for i, c in enumerate(sets)}
    full = G.full_mask
    reach_cache: dict[tuple[int, int], int] = {}

    def reach(prev, new, w):
        key = (prev & new, w)
        if key not in reach_cache:
            reach_cache[key] = ball_mask(G, w, r, full & ~(prev & new))
        return reach_cache[key]

    win = [0] * len(sets)  # win[c] = mask of robber positions from which cops (just placed at c) win
    changed = True
    while changed:
        changed = False
        for ci, prev in enumerate(sets):
            for w in iter_bits(full & ~prev & ~win[ci]):
                for nj, new in enumerate(sets):
                    escapes = reach(prev, new, w) & ~new
                    if escapes & ~win[nj] == 0:
                        win[ci] |= 1 << w
                        changed = True
                        break
    return win[index[0]] == full


def copwidth_value(G: Graph, r, max_sets: int = COPWIDTH_MAX_SETS) -> int:
    for k in range(0 if G.n == 0 else 1, G.n + 1):
        if copwidth_exact(G, r, k, max_sets):
            return k
    return G.n


def flipper_game_solve(G: Graph, r, k: int, max_specs: int = FLIPPER_MAX_SPECS) -> bool:
    """Does the flipper trap the runner from every start? States: (current flip graph, runner vertex)."""
    r = parse_radius(r)
    if G.n == 0:
        return True
    flips = k_flips(G, k, max_specs)
    ids = {H.adj: i for i, H in enumerate(flips)}
    if G.adj not in ids:
        ids[G.adj] = len(flips)
        flips.append(G)
    isolated = [sum(1 << v for v in range(H.n) if H.adj[v] == 0) for H in flips]
    moves = [[ball_mask(H, v, r) for v in range(H.n)] for H in flips]
    win = list(isolated)  # vertices from which the flipper wins with the runner on that graph
    changed = True
    while changed:
        changed = False
        targets = set(win)
        for j, H in enumerate(flips):
            for v in iter_bits(H.full_mask & ~win[j]):
                m = moves[j][v]
                if any(m & ~t == 0 for t in targets):
                    win[j] |= 1 << v
                    changed = True
    return win[ids[G.adj]] == G.full_mask


def flip_width_value(G: Graph, r, max_specs: int = FLIPPER_MAX_SPECS) -> int:
    for k in range(1, max(G.n, 1) + 1):
        if flipper_game_solve(G, r, k, max_specs):
            return k
    raise AssertionError("the flipper always wins with n blocks")


@dataclass
class FwCwReport:
    t: int
    r: object
    fw: int
    copwidth: int

    @property
    def bound(self) -> int:
        return 2 * self.fw * self.t ** 2

    @property
    def holds(self) -> bool:
        return self.copwidth <= self.bound

    def to_json(self) -> dict:
        return {"schema": 1, "t": self.t, "r": format_radius(self.r), "fw_3r": self.fw,
                "copwidth": self.copwidth, "bound": self.bound, "holds": self.holds}


def check_fw_cw(G: Graph, t: int, r, max_specs: int = FLIPPER_MAX_SPECS, max_sets: int = COPWIDTH_MAX_SETS) -> FwCwReport:
    r = parse_radius(r)
    require_ktt_free(G, t)
    fw = flip_width_value(G, 3 * r, max_specs)
    return FwCwReport(t, r, fw, copwidth_value(G, r, max_sets))
