"""Named corpus sweeps. Each one is seeded, checks one family of claims on
every instance, and returns a ``SuiteResult``.

Instances are independent, so ``jobs > 1`` fans them out over processes.
"""
from __future__ import annotations

import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .games import certify_monotone, check_fw_cw
from .generators import from_edge_mask, gnp, is_connected, random_ktt_free, random_order
from .graph import (
    INF,
    Graph,
    Partition,
    apply_pflip,
    enumerate_pflips,
    find_ktt,
    format_radius,
    is_ktt_free,
)
from .mergewidth import mw_from_order, normalize_rfs, order_from_rfs, validate_rfs
from .oracles import flip_reference, has_ktt_naive, sep_by_paths
from .ranks import check_lemma_frk
from .sparsify import check_engine, check_reasons, refinement_delta, sparsify_set
from .widths import OrderProfile, degeneracy, exact_values, sep_set, sw_exact, treewidth_oracle

DEFAULT_SEED = 20240917
RADII = (1, 2, 3, INF)


@dataclass
class SuiteResult:
    name: str
    cases: int = 0
    failures: list[str] = field(default_factory=list)
    stats: dict = field(default_factory=dict)
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "schema": 1, "suite": self.name, "passed": self.passed, "cases": self.cases,
            "failures": self.failures[:50], "failure_count": len(self.failures),
            "stats": self.stats, "elapsed_s": round(self.elapsed, 3),
        }


def _run(name: str, worker, instances, jobs: int) -> SuiteResult:
    start = time.perf_counter()
    result = SuiteResult(name)
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            outcomes = list(pool.map(worker, instances, chunksize=16))
    else:
        outcomes = [worker(x) for x in instances]
    for cases, failures, stats in outcomes:
        result.cases += cases
        result.failures.extend(failures)
        for key, value in stats.items():
            result.stats[key] = result.stats.get(key, 0) + value
    result.elapsed = time.perf_counter() - start
    return result


def _graph(spec) -> Graph:
    kind = spec[0]
    if kind == "mask":
        return from_edge_mask(spec[1], spec[2])
    if kind == "gnp":
        return gnp(spec[1], spec[2], spec[3])
    if kind == "ktt":
        return random_ktt_free(spec[1], spec[2], spec[3], spec[4])
    raise ValueError(kind)


def _tag(spec) -> str:
    return ":".join(str(x) for x in spec)


def _exhaustive(max_n: int, min_n: int = 1):
    for n in range(min_n, max_n + 1):
        for mask in range(1 << (n * (n - 1) // 2)):
            yield ("mask", n, mask)


# ---------------------------------------------------------------------------
# 1. sandwich chain


def _sandwich_worker(job):
    spec, order_seed, orders = job
    G = _graph(spec)
    rng = random.Random(order_seed)
    profiles = [OrderProfile(G, random_order(G.n, rng)) for _ in range(orders)]
    failures = []
    cases = 0
    for r in RADII:
        r2 = INF if r == INF else 2 * r - 1
        for prof in profiles:
            cases += 1
            scol, sw, wcol, scol2 = prof.scol(r), prof.sw(r), prof.wcol(r), prof.scol(r2)
            if not (scol <= sw + 1 <= wcol and sw + 1 <= scol2):
                failures.append(f"{_tag(spec)} r={format_radius(r)} order={prof.order}: "
                                f"scol={scol} sw={sw} wcol={wcol} scol2={scol2}")
        ex = exact_values(G, r)
        cases += 1
        if not (ex["scol"] <= ex["sw"] + 1 <= ex["wcol"] and ex["sw"] + 1 <= ex["scol2"]):
            failures.append(f"{_tag(spec)} r={format_radius(r)} exact: {ex}")
    return cases, failures, {"graphs": 1}


def sandwich(seed: int = DEFAULT_SEED, jobs: int = 1, samples: int = 500, orders: int = 50, max_n: int = 9) -> SuiteResult:
    rng = random.Random(seed)
    specs = [("mask", 5, m) for m in range(1 << 10)]
    specs += [("gnp", rng.randint(1, max_n), round(rng.uniform(0.1, 0.9), 3), rng.getrandbits(32)) for _ in range(samples)]
    jobs_list = [(s, rng.getrandbits(32), orders) for s in specs]
    return _run("sandwich", _sandwich_worker, jobs_list, jobs)


# ---------------------------------------------------------------------------
# 2. degeneracy / tree-width identities


def _identity_worker(spec):
    G = _graph(spec)
    failures = []
    s1, deg = sw_exact(G, 1).value, degeneracy(G)[0]
    if s1 != deg:
        failures.append(f"{_tag(spec)}: sw_1={s1} degeneracy={deg}")
    sinf, tw = sw_exact(G, INF).value, treewidth_oracle(G)
    if sinf != tw:
        failures.append(f"{_tag(spec)}: sw_inf={sinf} treewidth={tw}")
    return 2, failures, {"graphs": 1}


def identities(seed: int = DEFAULT_SEED, jobs: int = 1, samples: int = 300, max_n: int = 7) -> SuiteResult:
    rng = random.Random(seed)
    specs = list(_exhaustive(5))
    specs += [("gnp", rng.randint(1, max_n), round(rng.uniform(0.1, 0.9), 3), rng.getrandbits(32)) for _ in range(samples)]
    return _run("identities", _identity_worker, specs, jobs)


# ---------------------------------------------------------------------------
# 3. sparsification bounds


def _random_partition(n: int, blocks: int, rng: random.Random) -> Partition:
    labels = [rng.randrange(blocks) for _ in range(n)]
    return Partition.from_labels(labels)


def _split_random_block(P: Partition, rng: random.Random) -> Partition:
    splittable = [i for i, b in enumerate(P.blocks) if len(b) > 1]
    i = rng.choice(splittable)
    members = sorted(P.blocks[i])
    rng.shuffle(members)
    cut = rng.randint(1, len(members) - 1)
    blocks = list(P.blocks)
    blocks[i: i + 1] = [frozenset(members[:cut]), frozenset(members[cut:])]
    return Partition(P.n, tuple(blocks))


def _sparsify_worker(job):
    spec, t, seed = job
    G = _graph(spec)
    rng = random.Random(seed)
    P = _random_partition(G.n, rng.randint(1, 3), rng)
    failures = []
    stats = {"flips": 0, "chain_steps": 0, "graphs": 1}
    report = sparsify_set(G, P, t)
    cases = 2
    if not report.passed:
        failures.append(f"{_tag(spec)} P={P.to_json()}: |S|={len(report.deleted)} >= {report.bound}")
    if not check_reasons(G, P, report):
        failures.append(f"{_tag(spec)} P={P.to_json()}: reason tags do not match the definition")
    for F in enumerate_pflips(P):
        stats["flips"] += 1
        cases += 1
        eng = check_engine(G, P, F, report.deleted, report.bound)
        if not eng.passed:
            failures.append(f"{_tag(spec)} P={P.to_json()} F={sorted(F)}: {eng.to_json()}")
    Q = P
    while len(Q) < G.n:
        R = _split_random_block(Q, rng)
        cases += 1
        stats["chain_steps"] += 1
        try:
            refinement_delta(G, Q, R, t)
        except Exception as exc:  # noqa: BLE001 - every failure is recorded, not raised
            failures.append(f"{_tag(spec)} refine {Q.to_json()} -> {R.to_json()}: {exc}")
        Q = R
    return cases, failures, stats


def sparsify_bounds(seed: int = DEFAULT_SEED, jobs: int = 1, k22: int = 200, k33: int = 100, max_n: int = 14) -> SuiteResult:
    rng = random.Random(seed)
    jobs_list = []
    for t, count, (plo, phi) in ((2, k22, (0.05, 0.3)), (3, k33, (0.1, 0.5))):
        for _ in range(count):
            spec = ("ktt", rng.randint(1, max_n), t, round(rng.uniform(plo, phi), 3), rng.getrandbits(32))
            jobs_list.append((spec, t, rng.getrandbits(32)))
    return _run("sparsify", _sparsify_worker, jobs_list, jobs)


# ---------------------------------------------------------------------------
# 4. separation-width ordering -> flip sequence


def _mw_worker(job):
    spec, seed = job
    G = _graph(spec)
    order = random_order(G.n, random.Random(seed))
    failures = []
    stats = {"graphs": 1}
    for r in (1, 2):
        try:
            seq, claim = mw_from_order(G, order, r)
            rep = validate_rfs(G, seq)
            if not rep.ok:
                failures.append(f"{_tag(spec)} r={r}: invalid sequence at step {rep.step}: {rep.reason}")
            elif not claim.holds:
                failures.append(f"{_tag(spec)} r={r}: {claim.to_json()}")
            stats[f"max_width_r{r}"] = max(stats.get(f"max_width_r{r}", 0), claim.width)
        except Exception as exc:  # noqa: BLE001
            failures.append(f"{_tag(spec)} r={r}: {type(exc).__name__}: {exc}")
    return 2, failures, stats


def mw_bounds(seed: int = DEFAULT_SEED, jobs: int = 1, samples: int = 200, max_n: int = 10) -> SuiteResult:
    rng = random.Random(seed)
    jobs_list = [(("gnp", rng.randint(1, max_n), round(rng.uniform(0.1, 0.9), 3), rng.getrandbits(32)), rng.getrandbits(32))
                 for _ in range(samples)]
    result = _run("mw", _mw_worker, jobs_list, jobs)
    # stats were summed; maxima are not meaningful after summation
    result.stats = {"graphs": result.stats.get("graphs", 0)}
    return result


# ---------------------------------------------------------------------------
# 5. flip sequence -> ordering pipeline


def _pipeline_worker(job):
    spec, t, r = job
    G = _graph(spec)
    big = 3 * r + 1
    order = sw_exact(G, big + 1).order
    try:
        seq, _ = mw_from_order(G, order, big)
        seq = normalize_rfs(G, seq, big)
        _, cert = order_from_rfs(G, t, seq, r)
    except Exception as exc:  # noqa: BLE001
        return 1, [f"{_tag(spec)}: {type(exc).__name__}: {exc}"], {"graphs": 1}
    failures = [] if cert.holds else [f"{_tag(spec)}: {cert.to_json()}"]
    return 1, failures, {"graphs": 1, "total_slack": cert.total - cert.measured}


def pipeline(seed: int = DEFAULT_SEED, jobs: int = 1, samples: int = 150, max_n: int = 10, r: int = 1) -> SuiteResult:
    rng = random.Random(seed)
    jobs_list = [(("ktt", rng.randint(1, max_n), 2, round(rng.uniform(0.05, 0.4), 3), rng.getrandbits(32)), 2, r)
                 for _ in range(samples)]
    return _run("pipeline", _pipeline_worker, jobs_list, jobs)


# ---------------------------------------------------------------------------
# 6. monotone cop strategy


def _copw_worker(spec):
    G = _graph(spec)
    failures = []
    stats = {"graphs": 1, "games": 0}
    for r in (1, 2):
        order = sw_exact(G, 2 * r).order
        cert = certify_monotone(G, r, order)
        stats["games"] += cert.certification.leaves
        if not cert.ok:
            failures.append(f"{_tag(spec)} r={r} order={order}: {cert.certification.violation}")
        elif cert.certification.max_round > G.n:
            failures.append(f"{_tag(spec)} r={r}: game lasted {cert.certification.max_round} > n rounds")
    return 2, failures, stats


def _connected_sample(n: int, count: int, rng: random.Random):
    out = []
    while len(out) < count:
        spec = ("gnp", n, round(rng.uniform(0.2, 0.8), 3), rng.getrandbits(32))
        if is_connected(_graph(spec)):
            out.append(spec)
    return out


def cops(seed: int = DEFAULT_SEED, jobs: int = 1, samples: int = 300) -> SuiteResult:
    rng = random.Random(seed)
    specs = [s for s in _exhaustive(5) if is_connected(_graph(s))]
    specs += _connected_sample(6, samples, rng)
    return _run("copw", _copw_worker, specs, jobs)


# ---------------------------------------------------------------------------
# 7. flip-width versus copwidth


def _fwcw_worker(job):
    spec, t, r = job
    G = _graph(spec)
    if find_ktt(G, t) is not None:
        return 0, [], {"skipped_not_ktt_free": 1}
    rep = check_fw_cw(G, t, r)
    failures = [] if rep.holds else [f"{_tag(spec)}: {rep.to_json()}"]
    return 1, failures, {"checked": 1, f"fw_{rep.fw}": 1}


def fw_cw(seed: int = DEFAULT_SEED, jobs: int = 1, max_n: int = 5, t: int = 2, r: int = 1) -> SuiteResult:
    specs = []
    for spec in _exhaustive(max_n):
        G = _graph(spec)
        if is_connected(G) and G.m in (G.n - 1, G.n):
            specs.append((spec, t, r))
    return _run("fwcw", _fwcw_worker, specs, jobs)


# ---------------------------------------------------------------------------
# 8. flipper-rank versus splitter-rank


def _frk_worker(job):
    spec, t, r, ks = job
    G = _graph(spec)
    if find_ktt(G, t) is not None:
        return 0, [], {"skipped_not_ktt_free": 1}
    failures = []
    stats = {"checked": 0, "saturated": 0, "vacuous": 0}
    for k in ks:
        rep = check_lemma_frk(G, t, r, k)
        stats["checked"] += 1
        stats["saturated"] += rep.saturated
        stats["vacuous"] += rep.vacuous
        if not rep.holds:
            failures.append(f"{_tag(spec)} k={k}: {rep.to_json()}")
    return len(ks), failures, stats


def frk_lemma(seed: int = DEFAULT_SEED, jobs: int = 1, max_n: int = 5, t: int = 2, r: int = 1, ks=(1, 2)) -> SuiteResult:
    # one process keeps the rank memo warm across instances
    specs = [(s, t, r, tuple(ks)) for s in _exhaustive(max_n)]
    return _run("frk", _frk_worker, specs, 1)


# ---------------------------------------------------------------------------
# 9. oracle equivalences


def _sep_case(rng: random.Random) -> str | None:
    n = rng.randint(1, 7)
    G = gnp(n, rng.uniform(0.1, 0.9), rng.getrandbits(32))
    v = rng.randrange(n)
    S = {u for u in range(n) if u != v and rng.random() < 0.4}
    r = rng.choice((0, 1, 2, 3))
    fast, slow = set(sep_set(G, v, S, r)), sep_by_paths(G, v, S, r)
    if fast != slow:
        return f"sep n={n} edges={sorted(G.edges)} v={v} S={sorted(S)} r={r}: {sorted(fast)} vs {sorted(slow)}"
    return None


def _ktt_case(rng: random.Random) -> str | None:
    n = rng.randint(1, 10)
    t = rng.randint(1, 3)
    G = gnp(n, rng.uniform(0.2, 0.9), rng.getrandbits(32))
    free, witness = is_ktt_free(G, t)
    naive = not has_ktt_naive(G, t)
    if free != naive:
        return f"ktt n={n} t={t} edges={sorted(G.edges)}: fast={free} naive={naive}"
    if witness is not None:
        A, B = witness
        if len(A) != t or len(B) != t or A & B or any(not G.has_edge(a, b) for a in A for b in B):
            return f"ktt n={n} t={t}: bad witness {witness}"
    return None


def _flip_case(rng: random.Random) -> str | None:
    n = rng.randint(1, 8)
    G = gnp(n, rng.uniform(0.1, 0.9), rng.getrandbits(32))
    P = _random_partition(n, rng.randint(1, 3), rng)
    pairs = [(i, j) for i in range(len(P)) for j in range(i, len(P))]
    F = frozenset(p for p in pairs if rng.random() < 0.5)
    H = apply_pflip(G, P, F)
    if {frozenset(e) for e in H.edges} != flip_reference(G, P.blocks, F):
        return f"flip n={n} P={P.to_json()} F={sorted(F)}: disagrees with reference"
    # symmetry: the same flip undoes itself
    if apply_pflip(H, P, F) != G:
        return f"flip n={n} P={P.to_json()} F={sorted(F)}: not an involution"
    # hereditariness: restrict to a random subset
    S = sorted(v for v in range(n) if rng.random() < 0.6)
    if S:
        sub_P, remap = P.restrict(S)
        sub_F = frozenset((min(remap[i], remap[j]), max(remap[i], remap[j])) for i, j in F if i in remap and j in remap)
        left = H.induced(S)[0]
        right = apply_pflip(G.induced(S)[0], sub_P, sub_F)
        if left != right:
            return f"flip n={n} P={P.to_json()} F={sorted(F)} S={S}: not hereditary"
    # transitivity: a flip of H over Q is a flip of G over the common refinement
    Q = _random_partition(n, rng.randint(1, 3), rng)
    qpairs = [(i, j) for i in range(len(Q)) for j in range(i, len(Q))]
    F2 = frozenset(p for p in qpairs if rng.random() < 0.5)
    H2 = apply_pflip(H, Q, F2)
    R = P.common_refinement(Q)
    if len(R) > len(P) * len(Q):
        return f"flip: common refinement has {len(R)} > {len(P) * len(Q)} blocks"
    pp, qp = R.parents_in(P), R.parents_in(Q)
    combined = set()
    for a in range(len(R)):
        for b in range(a, len(R)):
            x = (min(pp[a], pp[b]), max(pp[a], pp[b])) in F
            y = (min(qp[a], qp[b]), max(qp[a], qp[b])) in F2
            if x != y:
                combined.add((a, b))
    if apply_pflip(G, R, frozenset(combined)) != H2:
        return f"flip n={n}: composition over the common refinement disagrees"
    return None


def _oracle_worker(job):
    kind, seed, count = job
    rng = random.Random(seed)
    case = {"sep": _sep_case, "ktt": _ktt_case, "flip": _flip_case}[kind]
    failures = [msg for msg in (case(rng) for _ in range(count)) if msg]
    return count, failures, {kind: count}


def oracles(seed: int = DEFAULT_SEED, jobs: int = 1, cases: int = 1000) -> SuiteResult:
    rng = random.Random(seed)
    jobs_list = [(kind, rng.getrandbits(32), cases) for kind in ("sep", "ktt", "flip")]
    return _run("oracles", _oracle_worker, jobs_list, jobs)


SUITES = {
    "sandwich": sandwich,
    "identities": identities,
    "sparsify": sparsify_bounds,
    "mw": mw_bounds,
    "pipeline": pipeline,
    "copw": cops,
    "fwcw": fw_cw,
    "frk": frk_lemma,
    "oracles": oracles,
}


def run_suite(name: str, seed: int = DEFAULT_SEED, jobs: int = 1) -> SuiteResult:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    return SUITES[name](seed=seed, jobs=jobs)
