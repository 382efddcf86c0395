"""Restrained flip sequences and the two constructions linking them to separation-width.

A restrained flip sequence is a list of steps (P_i, R_i, F_i): a refining chain
of partitions from {V} down to singletons, a shrinking chain of allowed pairs
from all pairs down to nothing, and per step a flip F_i over P_i whose result
G_i only uses allowed pairs. Its radius-r width is the largest number of blocks
of P_{i+1} that one vertex reaches within r steps along R_i.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb

from .errors import CapExceeded, InvalidWitness, PropertyViolation
from .graph import (
    INF,
    Graph,
    Partition,
    all_pairs,
    apply_pflip,
    ball_mask,
    flip_spec,
    format_radius,
    isolate_vertices,
    iter_bits,
    parse_radius,
    to_mask,
)
from .sparsify import require_ktt_free, sparsify_mask
from .widths import check_ordering, sw_of_order

SHATTER_MAX_SUBSETS = sum(comb(20, j) for j in range(7))


@dataclass(frozen=True)
class Step:
    partition: Partition
    restraint: frozenset[tuple[int, int]]
    flip: frozenset[tuple[int, int]]


@dataclass(frozen=True)
class RestrainedFlipSequence:
    n: int
    steps: tuple[Step, ...]

    def __len__(self):
        return len(self.steps)

    def graphs(self, G: Graph) -> list[Graph]:
        return [apply_pflip(G, s.partition, s.flip) for s in self.steps]

    def to_json(self, compact: bool = False) -> dict:
        steps = []
        prev: frozenset = frozenset()
        for i, s in enumerate(self.steps):
            entry = {"blocks": s.partition.to_json(), "flips": sorted(map(list, s.flip))}
            if compact and i > 0:
                entry["removed"] = sorted(map(list, prev - s.restraint))
                extra = s.restraint - prev
                if extra:
                    entry["added"] = sorted(map(list, extra))
            else:
                entry["restraint"] = sorted(map(list, s.restraint))
            steps.append(entry)
            prev = s.restraint
        return {"schema": 1, "n": self.n, "compact": compact, "steps": steps}

    @classmethod
    def from_json(cls, data: dict) -> RestrainedFlipSequence:
        n = data["n"]
        steps = []
        prev: frozenset = frozenset()
        try:
            for entry in data["steps"]:
                P = Partition.from_blocks(n, entry["blocks"])
                if "restraint" in entry:
                    R = frozenset(_pair(p) for p in entry["restraint"])
                else:
                    R = (prev - {_pair(p) for p in entry.get("removed", [])}) | {_pair(p) for p in entry.get("added", [])}
                steps.append(Step(P, frozenset(R), flip_spec(tuple(p) for p in entry["flips"])))
                prev = frozenset(R)
        except (KeyError, ValueError, TypeError) as exc:
            raise InvalidWitness(f"malformed flip sequence: {exc}") from None
        return cls(n, tuple(steps))


def _pair(p) -> tuple[int, int]:
    u, v = p
    return (min(u, v), max(u, v))


def _pair_adj(n: int, pairs) -> list[int]:
    adj = [0] * n
    for u, v in pairs:
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    return adj


@dataclass
class ValidationReport:
    ok: bool
    step: int | None = None
    reason: str = ""

    def to_json(self) -> dict:
        return {"valid": self.ok, "step": self.step, "reason": self.reason}


def validate_rfs(G: Graph, seq: RestrainedFlipSequence) -> ValidationReport:
    """Check every defining condition; report the first failure with its (0-based) step."""
    n = G.n
    if seq.n != n:
        return ValidationReport(False, None, f"sequence is for n={seq.n}, graph has n={n}")
    if not seq.steps:
        return ValidationReport(False, None, "empty sequence")
    every = all_pairs(n)
    for i, s in enumerate(seq.steps):
        P = s.partition
        if P.n != n:
            return ValidationReport(False, i, "partition over the wrong vertex count")
        for a, b in s.flip:
            if not (0 <= a < len(P) and 0 <= b < len(P)):
                return ValidationReport(False, i, f"flip pair ({a}, {b}) out of range")
        for u, v in s.restraint:
            if not (0 <= u < v < n):
                return ValidationReport(False, i, f"restraint pair ({u}, {v}) invalid")
    if len(seq.steps[0].partition) != min(n, 1):
        return ValidationReport(False, 0, "first partition must have one block")
    if not seq.steps[-1].partition.same_blocks(Partition.singletons(n)):
        return ValidationReport(False, len(seq.steps) - 1, "last partition must be singletons")
    if seq.steps[0].restraint != every:
        return ValidationReport(False, 0, "first restraint must be all vertex pairs")
    if seq.steps[-1].restraint:
        return ValidationReport(False, len(seq.steps) - 1, "last restraint must be empty")
    for i in range(1, len(seq.steps)):
        prev, cur = seq.steps[i - 1], seq.steps[i]
        if not cur.partition.refines(prev.partition):
            return ValidationReport(False, i, "partition does not refine the previous one")
        if not cur.restraint <= prev.restraint:
            return ValidationReport(False, i, "restraint grows")
    for i, s in enumerate(seq.steps):
        Gi = apply_pflip(G, s.partition, s.flip)
        if not Gi.edges <= s.restraint:
            extra = min(Gi.edges - s.restraint)
            return ValidationReport(False, i, f"flipped graph uses edge {extra} outside the restraint")
    return ValidationReport(True)


def radius_width(P: Partition, R, r) -> tuple[int, int | None]:
    """Max over v of the number of blocks within distance r of v in (V, R); returns (value, argmax)."""
    r = parse_radius(r)
    n = P.n
    if n == 0:
        return 0, None
    G = Graph(n, tuple(_pair_adj(n, R)))
    masks = P.masks
    best, arg = -1, None
    for v in range(n):
        b = ball_mask(G, v, r)
        cnt = sum(1 for m in masks if m & b)
        if cnt > best:
            best, arg = cnt, v
    return best, arg


def rfs_width(G: Graph, seq: RestrainedFlipSequence, r) -> int:
    rep = validate_rfs(G, seq)
    if not rep.ok:
        raise InvalidWitness(f"step {rep.step}: {rep.reason}")
    return _width(seq, r)


def _width(seq: RestrainedFlipSequence, r) -> int:
    if len(seq.steps) == 1:
        return 1
    return max(radius_width(seq.steps[i + 1].partition, seq.steps[i].restraint, r)[0] for i in range(len(seq.steps) - 1))


def refine_flip(P: Partition, F, Q: Partition) -> frozenset[tuple[int, int]]:
    """The flip over the refinement Q that produces the same graph as F over P."""
    parent = Q.parents_in(P)
    out = set()
    for a in range(len(Q)):
        for b in range(a, len(Q)):
            pa, pb = parent[a], parent[b]
            if (min(pa, pb), max(pa, pb)) in F:
                out.add((a, b))
    return frozenset(out)


def _split_once(coarse: Partition, fine: Partition) -> Partition:
    """Split the leftmost block of ``coarse`` that ``fine`` splits, peeling off the fine block with the smallest vertex."""
    for i, block in enumerate(coarse.blocks):
        parts = [b for b in fine.blocks if b <= block]
        if len(parts) > 1:
            piece = min(parts, key=min)
            blocks = list(coarse.blocks)
            blocks[i: i + 1] = [piece, block - piece]
            return Partition(coarse.n, tuple(blocks))
    raise ValueError("fine partition does not strictly refine the coarse one")


def is_normalized(seq: RestrainedFlipSequence) -> bool:
    return len(seq.steps) == max(seq.n, 1) and all(len(s.partition) == i + 1 for i, s in enumerate(seq.steps))


def normalize_rfs(G: Graph, seq: RestrainedFlipSequence, r=None) -> RestrainedFlipSequence:
    """Length-n equivalent of a sequence in which every step splits exactly one block.

    Repeated partitions are collapsed (keeping the later restraint, or the first
    step when the repeat is at the very start), then coarser intermediate
    partitions are inserted reusing the earlier step's restraint and flipped
    graph. With ``r`` given, the radius-r width is recomputed and must not change.
    """
    rep = validate_rfs(G, seq)
    if not rep.ok:
        raise InvalidWitness(f"step {rep.step}: {rep.reason}")
    kept: list[Step] = [seq.steps[0]]
    for s in seq.steps[1:]:
        if s.partition.same_blocks(kept[-1].partition):
            if len(kept) > 1:
                kept[-1] = s
            # a repeat of the one-block start keeps the all-pairs step
            continue
        kept.append(s)
    out: list[Step] = []
    for i, s in enumerate(kept):
        out.append(s)
        if i + 1 == len(kept):
            break
        nxt = kept[i + 1].partition
        cur = s.partition
        while len(nxt) > len(cur) + 1:
            cur = _split_once(cur, nxt)
            out.append(Step(cur, s.restraint, refine_flip(s.partition, s.flip, cur)))
    result = RestrainedFlipSequence(seq.n, tuple(out))
    assert is_normalized(result), "normalisation produced a sequence of the wrong shape"
    if r is not None:
        before, after = _width(seq, parse_radius(r)), _width(result, parse_radius(r))
        if before != after:
            raise PropertyViolation(f"normalisation changed the radius-{format_radius(r)} width from {before} to {after}")
    return result


# ---------------------------------------------------------------------------
# separation-width ordering -> flip sequence


def shatter(G: Graph, m: int, max_subsets: int = SHATTER_MAX_SUBSETS) -> int:
    """max over |A| <= m of |A| + number of distinct traces N(v) & A for v outside A."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    top = min(m, G.n)
    total = sum(comb(G.n, j) for j in range(top + 1))
    if total > max_subsets:
        raise CapExceeded(f"shatter function would enumerate {total} subsets (cap {max_subsets})")
    best = 0
    adj = G.adj
    for size in range(top + 1):
        for A in combinations(range(G.n), size):
            a = to_mask(A)
            traces = {adj[v] & a for v in range(G.n) if not a >> v & 1}
            best = max(best, size + len(traces))
    return best


@dataclass
class MwClaim:
    r: object
    width: int
    k: int
    power_bound: int
    shatter_value: int
    shatter_bound: int

    @property
    def holds(self) -> bool:
        return self.width <= self.power_bound and self.width <= self.shatter_bound

    def to_json(self) -> dict:
        return {
            "r": format_radius(self.r),
            "width": self.width,
            "k": self.k,
            "power_bound": self.power_bound,
            "shatter": self.shatter_value,
            "shatter_bound": self.shatter_bound,
            "holds": self.holds,
        }


def order_partition(G: Graph, order, i: int) -> Partition:
    """Singletons on the first i vertices; the rest grouped by their neighbourhood in that prefix."""
    prefix = order[:i]
    pm = to_mask(prefix)
    classes: dict[int, list[int]] = {}
    for v in sorted(order[i:]):
        classes.setdefault(G.adj[v] & pm, []).append(v)
    blocks = [frozenset([v]) for v in prefix] + [frozenset(c) for c in sorted(classes.values())]
    return Partition(G.n, tuple(blocks))


def mw_from_order(G: Graph, order, r, max_subsets: int = SHATTER_MAX_SUBSETS) -> tuple[RestrainedFlipSequence, MwClaim]:
    """Flip sequence isolating the order's prefixes one vertex at a time.

    Step i isolates the first i-1 vertices. Its partition keeps those as
    singletons and groups the rest by neighbourhood in the prefix, so the
    isolation is a single flip: a prefix vertex u is flipped against a class
    exactly when the whole class lies in N(u). The first restraint is all
    pairs; later ones are the edge sets of the isolated graphs.
    """
    r = parse_radius(r)
    order = check_ordering(G, order)
    n = G.n
    steps = []
    for i in range(max(n, 1)):
        P = order_partition(G, order, i)
        Gi = isolate_vertices(G, order[:i])
        flips = set()
        for a in range(i):
            u = order[a]
            for b in range(a, len(P)):
                if P.masks[b] & ~G.adj[u] == 0 and not (b < i and b == a):
                    flips.add((a, b))
        F = frozenset(flips)
        if apply_pflip(G, P, F) != Gi:
            raise PropertyViolation(f"flip reconstruction failed at step {i}")
        R = all_pairs(n) if i == 0 else Gi.edges
        steps.append(Step(P, R, F))
    seq = RestrainedFlipSequence(n, tuple(steps))
    rep = validate_rfs(G, seq)
    if not rep.ok:
        raise PropertyViolation(f"constructed sequence invalid at step {rep.step}: {rep.reason}")
    k = sw_of_order(G, order, INF if r == INF else r + 1).value
    pi = shatter(G, k, max_subsets)
    claim = MwClaim(r, _width(seq, r), k, 2 ** (k + 1) + 1, pi, 2 * pi + 1)
    if not claim.holds:
        raise PropertyViolation(f"width {claim.width} exceeds bounds {claim.power_bound}/{claim.shatter_bound}")
    return seq, claim


# ---------------------------------------------------------------------------
# flip sequence -> separation-width ordering


@dataclass
class BoundCertificate:
    d: int
    t: int
    r: object
    measured: int

    @property
    def slack(self) -> int:
        return 2 * self.t ** 2

    @property
    def components(self) -> dict[str, int]:
        d, t = self.d, self.t
        return {"b1": d * t, "b2": d * (d + 1) * t ** 3, "b3": d * t ** 2, "b4": d * d * t}

    @property
    def total(self) -> int:
        return self.slack + sum(self.components.values())

    @property
    def holds(self) -> bool:
        return self.measured <= self.total

    def to_json(self) -> dict:
        return {
            "d": self.d, "t": self.t, "r": format_radius(self.r),
            "slack": self.slack, **self.components,
            "total": self.total, "measured_sw": self.measured, "holds": self.holds,
        }


def order_from_rfs(G: Graph, t: int, seq: RestrainedFlipSequence, r) -> tuple[tuple[int, ...], BoundCertificate]:
    """Ordering listing Sparsify(G, P_1, t), then the new vertices of Sparsify(G, P_2, t), and so on.

    d is the radius-(3r+1) width of the given normalised sequence; the
    ordering's radius-r separation-width is checked against
    2t^2 + dt + d(d+1)t^3 + dt^2 + d^2 t.
    """
    r = parse_radius(r)
    if r < 1:
        raise ValueError("r must be at least 1")
    require_ktt_free(G, t)
    rep = validate_rfs(G, seq)
    if not rep.ok:
        raise InvalidWitness(f"step {rep.step}: {rep.reason}")
    if not is_normalized(seq):
        raise InvalidWitness("sequence must be normalised (one new block per step)")
    d = _width(seq, INF if r == INF else 3 * r + 1)
    covered = 0
    order: list[int] = []
    for s in seq.steps:
        delta = sparsify_mask(G, s.partition, t) & ~covered
        order.extend(iter_bits(delta))
        covered |= delta
    # t = 1 leaves singletons t-big, so some vertices may never be deleted
    order.extend(iter_bits(G.full_mask & ~covered))
    cert = BoundCertificate(d, t, r, sw_of_order(G, order, r).value)
    if not cert.holds:
        raise PropertyViolation(f"ordering has sw={cert.measured} above certified total {cert.total}")
    return tuple(order), cert
