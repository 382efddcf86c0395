"""Replacing a partition flip by a small vertex deletion in K_{t,t}-free graphs.

``sparsify_set`` deletes every vertex that sits in a part with fewer than t^2
vertices, plus every vertex missing fewer than t vertices of some part that
has at least t^2. In a K_{t,t}-free graph this set has fewer than |P| t^2
vertices, and every surviving edge has its endpoints within distance 3 in
*any* P-flip of the graph.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .errors import InvalidWitness, NotKttFree, PropertyViolation
from .graph import (
    INF,
    Graph,
    Partition,
    all_distances,
    apply_pflip,
    check_flip_spec,
    distances_from,
    find_ktt,
    from_mask,
    iter_bits,
    parse_radius,
    to_mask,
)

SMALL = "in-small-part"
COMPLETE = "complete-to-big-part"


def require_ktt_free(G: Graph, t: int) -> None:
    w = find_ktt(G, t)
    if w is not None:
        raise NotKttFree(t, w)


def is_t_small(block: Iterable[int], t: int) -> bool:
    return len(set(block)) < t * t


def is_t_complete(G: Graph, v: int, block: Iterable[int], t: int) -> bool:
    """|block \\ N(v)| < t.

    v is never its own neighbour, so when v lies in the block it counts as one
    of the missed vertices.
    """
    b = to_mask(block)
    return (b & ~G.adj[v]).bit_count() < t


def _complete_mask(G: Graph, bmask: int, t: int) -> int:
    out = 0
    for v in range(G.n):
        if (bmask & ~G.adj[v]).bit_count() < t:
            out |= 1 << v
    return out


def complete_vertices(G: Graph, block: Iterable[int], t: int) -> frozenset[int]:
    return from_mask(_complete_mask(G, to_mask(block), t))


@dataclass(frozen=True)
class Reason:
    kind: str
    block: int

    def __str__(self):
        return f"{self.kind}({self.block})"


@dataclass
class SparsifyReport:
    deleted: frozenset[int]
    reasons: dict[int, Reason]
    bound: int
    t: int

    @property
    def passed(self) -> bool:
        return len(self.deleted) < self.bound

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "deleted": sorted(self.deleted),
            "reasons": {str(v): str(self.reasons[v]) for v in sorted(self.reasons)},
            "bound": self.bound,
            "passed": self.passed,
        }


def sparsify_mask(G: Graph, P: Partition, t: int) -> int:
    out = 0
    t2 = t * t
    for bmask in P.masks:
        if bmask.bit_count() < t2:
            out |= bmask
        else:
            out |= _complete_mask(G, bmask, t)
    return out


def sparsify_set(G: Graph, P: Partition, t: int) -> SparsifyReport:
    if P.n != G.n:
        raise ValueError("partition and graph disagree on n")
    if t < 1:
        raise ValueError("t must be positive")
    t2 = t * t
    reasons: dict[int, Reason] = {}
    for i, block in enumerate(P.blocks):
        if len(block) < t2:
            for v in block:
                reasons[v] = Reason(SMALL, i)
    for i, bmask in enumerate(P.masks):
        if bmask.bit_count() >= t2:
            for v in iter_bits(_complete_mask(G, bmask, t)):
                reasons.setdefault(v, Reason(COMPLETE, i))
    return SparsifyReport(frozenset(reasons), reasons, len(P) * t2, t)


def check_reasons(G: Graph, P: Partition, report: SparsifyReport) -> bool:
    """Re-validate every reason tag against the definition."""
    t = report.t
    for v, why in report.reasons.items():
        block = P.blocks[why.block]
        if why.kind == SMALL:
            if v not in block or not is_t_small(block, t):
                return False
        elif why.kind == COMPLETE:
            if is_t_small(block, t) or not is_t_complete(G, v, block, t):
                return False
        else:
            return False
    return set(report.reasons) == set(report.deleted)


@dataclass
class EngineReport:
    deleted: frozenset[int]
    flip: frozenset
    bound: int
    edge_violation: tuple | None = None
    distance_violation: tuple | None = None
    size_ok: bool = True

    @property
    def passed(self) -> bool:
        return self.edge_violation is None and self.distance_violation is None and self.size_ok

    def to_json(self) -> dict:
        return {
            "deleted": sorted(self.deleted),
            "flip": sorted(map(list, self.flip)),
            "bound": self.bound,
            "size_ok": self.size_ok,
            "edge_violation": _jsonable(self.edge_violation),
            "distance_violation": _jsonable(self.distance_violation),
            "passed": self.passed,
        }


def _jsonable(v):
    if v is None:
        return None
    return ["inf" if x == INF else x for x in v]


def check_engine(G: Graph, P: Partition, F, S: Iterable[int], bound: int) -> EngineReport:
    """Check the three claims for a given deletion set S and flip F.

    (a) every edge of G - S has flipped distance <= 3,
    (b) dist_H(u, v) <= 3 dist_{G-S}(u, v) for all surviving u, v,
    (c) |S| < bound.
    """
    s = to_mask(S)
    H = apply_pflip(G, P, F)
    keep = G.full_mask & ~s
    report = EngineReport(from_mask(s), frozenset(F), bound, size_ok=s.bit_count() < bound)
    dH = all_distances(H)
    for u in iter_bits(keep):
        for v in iter_bits(G.adj[u] & keep):
            if u < v and dH[u][v] > 3:
                report.edge_violation = (u, v, dH[u][v])
                break
        if report.edge_violation:
            break
    for u in iter_bits(keep):
        dG = distances_from(G, u, keep)
        for v in iter_bits(keep):
            if dH[u][v] > 3 * dG[v]:
                report.distance_violation = (u, v, dG[v], dH[u][v])
                return report
    return report


def verify_engine(G: Graph, P: Partition, t: int, F, deleted: Iterable[int] | None = None) -> EngineReport:
    """Verify the flip-sparsification guarantees for one P-flip.

    ``deleted`` overrides the computed set; it exists so that negative fixtures
    (a deliberately wrong S) can exercise the failure path.
    """
    require_ktt_free(G, t)
    check_flip_spec(P, F)
    S = sparsify_set(G, P, t).deleted if deleted is None else deleted
    return check_engine(G, P, F, S, len(P) * t * t)


def refinement_delta(G: Graph, P: Partition, P_refined: Partition, t: int) -> frozenset[int]:
    """Sparsify(G, P') \\ Sparsify(G, P) for a one-block refinement; checks |delta| < 2t^2."""
    if not P_refined.refines(P) or len(P_refined) != len(P) + 1:
        raise InvalidWitness("second partition must refine the first with exactly one more block")
    require_ktt_free(G, t)
    delta = sparsify_mask(G, P_refined, t) & ~sparsify_mask(G, P, t)
    if delta.bit_count() >= 2 * t * t:
        raise PropertyViolation(f"refinement delta has {delta.bit_count()} >= 2t^2 vertices")
    return from_mask(delta)


def _separated(d, r) -> bool:
    return d == INF if r == INF else d > r


@dataclass
class FlatnessVerdict:
    r: object
    separated: list = field(default_factory=list)
    inside_deleted: list = field(default_factory=list)
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def deletion_witness_from_flip(G: Graph, t: int, P: Partition, F, pairs, r):
    """Turn a flip that spreads ``pairs`` beyond 3r into a deletion that spreads them beyond r.

    Returns the deletion set and a verdict listing, per pair, whether it ended
    up separated in G - S or has an endpoint inside S.
    """
    r = parse_radius(r)
    require_ktt_free(G, t)
    H = apply_pflip(G, P, F)
    far = INF if r == INF else 3 * r
    for u, v in pairs:
        d = distances_from(H, u)[v]
        if not _separated(d, far):
            raise InvalidWitness(f"pair ({u}, {v}) is at distance {d} <= {far} in the flipped graph")
    S = sparsify_set(G, P, t).deleted
    keep = G.full_mask & ~to_mask(S)
    verdict = FlatnessVerdict(r)
    for u, v in pairs:
        if u in S or v in S:
            verdict.inside_deleted.append((u, v))
            continue
        d = distances_from(G, u, keep)[v]
        (verdict.separated if _separated(d, r) else verdict.failures).append((u, v))
    return S, verdict
