"""Command-line entry point.

Exit codes: 0 success, 1 a checked property failed, 2 bad input or usage,
3 a solver cap was exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .errors import CapExceeded, GraphFormatError, InvalidWitness, NotKttFree, PropertyViolation
from .games import (
    COPWIDTH_MAX_SETS,
    FLIPPER_MAX_SPECS,
    GameTranscript,
    GreedyRobber,
    RandomRobber,
    adversarial_robber_certify,
    certify_monotone,
    check_fw_cw,
    copwidth_exact,
    copwidth_value,
    flip_width_value,
    flipper_game_solve,
    monotone_cop_strategy,
    play_game,
    validate_transcript,
)
from .generators import GENERATORS
from .graph import Graph, enumerate_pflips, flip_spec, format_radius, parse_radius
from .io import parse_graph, parse_partition, read_graph, write_graph
from .mergewidth import (
    SHATTER_MAX_SUBSETS,
    RestrainedFlipSequence,
    mw_from_order,
    normalize_rfs,
    order_from_rfs,
    rfs_width,
    validate_rfs,
)
from .ranks import check_lemma_frk
from .sparsify import require_ktt_free, sparsify_set, verify_engine
from .sweeps import DEFAULT_SEED, SUITES, run_suite
from .widths import (
    EXACT_CAP,
    TREEWIDTH_CAP,
    WidthResult,
    degeneracy,
    scol_exact,
    scol_of_order,
    sw_exact,
    sw_greedy,
    sw_of_order,
    treewidth_oracle,
    wcol_exact,
    wcol_of_order,
)

OK, VIOLATION, USAGE, CAPS = 0, 1, 2, 3


class Violation(Exception):
    """Raised by a subcommand after it has written its report, to set exit code 1."""


def _emit(args, payload) -> None:
    text = payload if isinstance(payload, str) else json.dumps(payload, indent=2) + "\n"
    if getattr(args, "output", None) and args.output != "-":
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def _load_graph(args, path=None) -> Graph:
    return read_graph(path or args.graph, args.format)


def _load_graphs(args) -> list[Graph]:
    """A file may hold several graph6 lines; anything else is a single graph."""
    text = sys.stdin.read() if args.graph == "-" else Path(args.graph).read_text()
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if args.format in ("auto", "graph6") and len(lines) > 1 and all(" " not in ln for ln in lines):
        return [parse_graph(ln, "graph6") for ln in lines]
    return [parse_graph(text, args.format)]


def _load_json(path: str):
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphFormatError(f"invalid JSON: {exc.msg}", line=exc.lineno) from None


def _parse_order(G: Graph, spec: str, r=None) -> tuple[int, ...]:
    if spec == "identity":
        return tuple(range(G.n))
    if spec == "reverse":
        return tuple(reversed(range(G.n)))
    if spec == "degeneracy":
        return degeneracy(G)[1]
    if spec == "sw-exact":
        return sw_exact(G, r).order
    if spec == "sw-greedy":
        return sw_greedy(G, r).order
    if Path(spec).exists():
        data = json.loads(Path(spec).read_text())
        return tuple(data["order"] if isinstance(data, dict) else data)
    try:
        return tuple(int(x) for x in spec.replace(",", " ").split())
    except ValueError:
        raise InvalidWitness(f"cannot read ordering {spec!r}") from None


def _parse_flip(text: str):
    """``"0,1;1,1"`` -> {(0, 1), (1, 1)}."""
    pairs = []
    for chunk in filter(None, text.split(";")):
        i, j = chunk.split(",")
        pairs.append((int(i), int(j)))
    return flip_spec(pairs)


# ---------------------------------------------------------------------------
# width


def cmd_width(args) -> None:
    G = _load_graph(args)
    r = parse_radius(args.r)
    if args.param == "degeneracy":
        value, order = degeneracy(G)
        res = WidthResult("degeneracy", 1, value, order, True)
    elif args.param == "treewidth":
        res = WidthResult("treewidth", parse_radius("inf"), treewidth_oracle(G, args.cap_tw), None, True)
    elif args.order:
        order = _parse_order(G, args.order, r)
        res = {"sw": sw_of_order, "scol": scol_of_order, "wcol": wcol_of_order}[args.param](G, order, r)
    elif args.greedy:
        order = sw_greedy(G, r).order if args.param == "sw" else degeneracy(G)[1]
        res = {"sw": sw_of_order, "scol": scol_of_order, "wcol": wcol_of_order}[args.param](G, order, r)
    else:
        res = {"sw": sw_exact, "scol": scol_exact, "wcol": wcol_exact}[args.param](G, r, args.cap)
    _emit(args, res.to_json())


# ---------------------------------------------------------------------------
# sparsify


def cmd_sparsify(args) -> None:
    G = _load_graph(args)
    P = parse_partition(Path(args.partition).read_text(), G.n)
    report = sparsify_set(G, P, args.t)
    out = report.to_json()
    failed = not report.passed
    if args.flip is not None or args.all_flips:
        flips = enumerate_pflips(P, cap=args.max_blocks) if args.all_flips else [_parse_flip(args.flip)]
        results = [verify_engine(G, P, args.t, F) for F in flips]
        bad = [res.to_json() for res in results if not res.passed]
        out["engine"] = {"checked": len(results), "passed": not bad, "failures": bad[:20]}
        failed |= bool(bad)
    else:
        require_ktt_free(G, args.t)
    _emit(args, out)
    if failed:
        raise Violation("sparsification bound violated")


# ---------------------------------------------------------------------------
# mw


def _load_sequence(path: str) -> RestrainedFlipSequence:
    data = _load_json(path)
    if isinstance(data, dict) and "sequence" in data:
        data = data["sequence"]
    return RestrainedFlipSequence.from_json(data)


def cmd_mw_build(args) -> None:
    G = _load_graph(args)
    r = parse_radius(args.r)
    order = _parse_order(G, args.order, r if r == float("inf") else r + 1)
    seq, claim = mw_from_order(G, order, r, args.max_subsets)
    _emit(args, {"schema": 1, "order": list(order), "width": claim.width, "claim": claim.to_json(),
                 "sequence": seq.to_json(compact=args.compact)})


def cmd_mw_verify(args) -> None:
    G = _load_graph(args)
    seq = _load_sequence(args.sequence)
    rep = validate_rfs(G, seq)
    out = {"schema": 1, **rep.to_json(), "length": len(seq)}
    if rep.ok:
        out["widths"] = {format_radius(parse_radius(r)): rfs_width(G, seq, r) for r in args.r}
    _emit(args, out)
    if not rep.ok:
        raise Violation(rep.reason)


def cmd_mw_normalize(args) -> None:
    G = _load_graph(args)
    seq = _load_sequence(args.sequence)
    out = normalize_rfs(G, seq, args.r)
    _emit(args, {"schema": 1, "sequence": out.to_json(compact=args.compact)})


def cmd_mw_to_order(args) -> None:
    G = _load_graph(args)
    seq = _load_sequence(args.sequence)
    if args.normalize:
        seq = normalize_rfs(G, seq)
    order, cert = order_from_rfs(G, args.t, seq, args.r)
    _emit(args, {"schema": 1, "order": list(order), "certificate": cert.to_json()})


# ---------------------------------------------------------------------------
# game


def cmd_game_play(args) -> None:
    G = _load_graph(args)
    r = parse_radius(args.r)
    order = _parse_order(G, args.order, 2 * r)
    k = args.k if args.k is not None else sw_of_order(G, order, 2 * r).value + 1
    cops = monotone_cop_strategy(G, r, order, include_new_vertex=not args.cripple)
    if args.robber == "greedy":
        robber = GreedyRobber(G, r, args.start)
    else:
        robber = RandomRobber(G, r, args.seed)
    tr = play_game(G, r, k, cops, robber, args.max_rounds)
    _emit(args, tr.to_jsonl())


def cmd_game_certify(args) -> None:
    r = parse_radius(args.r)
    results = []
    for G in _load_graphs(args):
        order = _parse_order(G, args.order, 2 * r)
        if args.cripple or args.k is not None:
            strategy = monotone_cop_strategy(G, r, order, include_new_vertex=not args.cripple)
            k = args.k if args.k is not None else sw_of_order(G, order, 2 * r).value + 1
            cert = adversarial_robber_certify(G, r, strategy, k, max_n=args.max_n)
            entry = {"n": G.n, "order": list(order), "budget": k, **cert.to_json()}
        else:
            entry = {"n": G.n, **certify_monotone(G, r, order, max_n=args.max_n).to_json()}
        results.append(entry)
    ok = all(e["certified"] for e in results)
    _emit(args, {"schema": 1, "r": format_radius(r), "graphs": len(results),
                 "certified": sum(e["certified"] for e in results), "all_certified": ok, "results": results})
    if not ok:
        raise Violation("certification failed")


def cmd_game_solve(args) -> None:
    G = _load_graph(args)
    r = parse_radius(args.r)
    if args.game == "cops":
        if args.k is not None:
            out = {"game": "cops", "k": args.k, "cops_win": copwidth_exact(G, r, args.k, args.max_sets)}
        else:
            out = {"game": "cops", "copwidth": copwidth_value(G, r, args.max_sets)}
    else:
        if args.k is not None:
            out = {"game": "flipper", "k": args.k, "flipper_wins": flipper_game_solve(G, r, args.k, args.max_specs)}
        else:
            out = {"game": "flipper", "flip_width": flip_width_value(G, r, args.max_specs)}
    _emit(args, {"schema": 1, "r": format_radius(r), **out})


def cmd_game_fwcw(args) -> None:
    G = _load_graph(args)
    rep = check_fw_cw(G, args.t, args.r, args.max_specs, args.max_sets)
    _emit(args, rep.to_json())
    if not rep.holds:
        raise Violation("copwidth exceeds 2 fw t^2")


def cmd_game_replay(args) -> None:
    text = sys.stdin.read() if args.transcript == "-" else Path(args.transcript).read_text()
    tr = GameTranscript.from_jsonl(text)
    G = _load_graph(args) if args.graph else Graph.from_edges(tr.n, tr.edges)
    check = validate_transcript(G, tr)
    _emit(args, {"schema": 1, "valid": check.ok, "round": check.round, "reason": check.reason,
                 "winner": tr.winner, "rounds": max(len(tr.rounds) - 1, 0)})
    if not check.ok:
        raise Violation(check.reason)


# ---------------------------------------------------------------------------
# rank, gen, sweep


def cmd_rank(args) -> None:
    G = _load_graph(args)
    rep = check_lemma_frk(G, args.t, args.r, args.k)
    _emit(args, rep.to_json())
    if not rep.holds:
        raise Violation("splitter-rank exceeds flipper-rank")


def cmd_gen(args) -> None:
    G = GENERATORS[args.kind](args)
    _emit(args, write_graph(G, args.out_format))


def cmd_sweep(args) -> None:
    res = run_suite(args.suite, seed=args.seed, jobs=args.jobs)
    _emit(args, res.to_json())
    if not res.passed:
        raise Violation(f"suite {args.suite} failed")


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fliplab", description="Flip, width and game witnesses for small graphs.")
    p.add_argument("--version", action="version", version=f"fliplab {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["auto", "edgelist", "graph6"], default="auto", help="input graph format")
    common.add_argument("-o", "--output", default="-", help="write the report here instead of stdout")
    sub = p.add_subparsers(dest="command", required=True)

    w = sub.add_parser("width", parents=[common], help="separation-width and colouring numbers")
    w.add_argument("graph")
    w.add_argument("--param", choices=["sw", "scol", "wcol", "degeneracy", "treewidth"], default="sw")
    w.add_argument("--r", default="1", help="radius (integer or 'inf')")
    mode = w.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true", help="exact search (default)")
    mode.add_argument("--greedy", action="store_true")
    mode.add_argument("--order", help="evaluate a given ordering (comma list, file, or 'identity')")
    w.add_argument("--cap", type=int, default=EXACT_CAP, help="largest n for exact search")
    w.add_argument("--cap-tw", type=int, default=TREEWIDTH_CAP, help="largest n for the tree-width oracle")
    w.set_defaults(func=cmd_width)

    s = sub.add_parser("sparsify", parents=[common], help="deletion set replacing a partition flip")
    s.add_argument("graph")
    s.add_argument("partition", help="partition file (JSON or one block per line)")
    s.add_argument("--t", type=int, required=True)
    s.add_argument("--all-flips", action="store_true", help="verify the guarantees for every flip over the partition")
    s.add_argument("--flip", help="verify one flip, e.g. '0,1;1,1'")
    s.add_argument("--max-blocks", type=int, default=4, help="cap on partition size for --all-flips")
    s.set_defaults(func=cmd_sparsify)

    mw = sub.add_parser("mw", help="restrained flip sequences").add_subparsers(dest="mw_command", required=True)
    b = mw.add_parser("build", parents=[common], help="flip sequence from a vertex ordering")
    b.add_argument("graph")
    b.add_argument("--order", default="sw-exact", help="identity, reverse, degeneracy, sw-exact, sw-greedy, list or file")
    b.add_argument("--r", default="1")
    b.add_argument("--compact", action="store_true", help="store restraints as deltas")
    b.add_argument("--max-subsets", type=int, default=SHATTER_MAX_SUBSETS, help="cap on shatter-function enumeration")
    b.set_defaults(func=cmd_mw_build)
    v = mw.add_parser("verify", parents=[common], help="validate a sequence and report its widths")
    v.add_argument("graph")
    v.add_argument("sequence")
    v.add_argument("--r", nargs="+", default=["1"])
    v.set_defaults(func=cmd_mw_verify)
    nm = mw.add_parser("normalize", parents=[common], help="one new block per step")
    nm.add_argument("graph")
    nm.add_argument("sequence")
    nm.add_argument("--r", default=None, help="also assert the width at this radius is unchanged")
    nm.add_argument("--compact", action="store_true")
    nm.set_defaults(func=cmd_mw_normalize)
    to = mw.add_parser("to-order", parents=[common], help="ordering from a flip sequence, with its bound certificate")
    to.add_argument("graph")
    to.add_argument("sequence")
    to.add_argument("--t", type=int, required=True)
    to.add_argument("--r", default="1")
    to.add_argument("--normalize", action="store_true", help="normalise the sequence first")
    to.set_defaults(func=cmd_mw_to_order)

    g = sub.add_parser("game", help="cops and robber, flipper game").add_subparsers(dest="game_command", required=True)
    gp = g.add_parser("play", parents=[common], help="play the monotone cop strategy, emit a JSON-lines transcript")
    gp.add_argument("graph")
    gp.add_argument("--r", default="1")
    gp.add_argument("--k", type=int, default=None, help="cop budget (default sw_2r(order)+1)")
    gp.add_argument("--order", default="sw-exact")
    gp.add_argument("--robber", choices=["greedy", "random"], default="greedy")
    gp.add_argument("--start", type=int, default=0, help="greedy robber's start vertex")
    gp.add_argument("--seed", type=int, default=DEFAULT_SEED)
    gp.add_argument("--max-rounds", type=int, default=None)
    gp.add_argument("--cripple", action="store_true", help="omit the new order vertex from each cop set")
    gp.set_defaults(func=cmd_game_play)
    gc = g.add_parser("certify", parents=[common], help="certify the monotone strategy against every robber")
    gc.add_argument("graph", help="one graph, or a file of graph6 lines")
    gc.add_argument("--r", default="1")
    gc.add_argument("--order", default="sw-exact")
    gc.add_argument("--k", type=int, default=None)
    gc.add_argument("--cripple", action="store_true")
    gc.add_argument("--max-n", type=int, default=10)
    gc.set_defaults(func=cmd_game_certify)
    gs = g.add_parser("solve", parents=[common], help="exact solvers for tiny graphs")
    gs.add_argument("graph")
    gs.add_argument("--game", choices=["cops", "flipper"], default="cops")
    gs.add_argument("--r", default="1")
    gs.add_argument("--k", type=int, default=None, help="decide this width instead of computing the minimum")
    gs.add_argument("--max-sets", type=int, default=COPWIDTH_MAX_SETS)
    gs.add_argument("--max-specs", type=int, default=FLIPPER_MAX_SPECS)
    gs.set_defaults(func=cmd_game_solve)
    gf = g.add_parser("fwcw", parents=[common], help="compare copwidth with 2 fw_3r t^2")
    gf.add_argument("graph")
    gf.add_argument("--t", type=int, required=True)
    gf.add_argument("--r", default="1")
    gf.add_argument("--max-sets", type=int, default=COPWIDTH_MAX_SETS)
    gf.add_argument("--max-specs", type=int, default=FLIPPER_MAX_SPECS)
    gf.set_defaults(func=cmd_game_fwcw)
    gr = g.add_parser("replay", parents=[common], help="re-check a transcript against the rules")
    gr.add_argument("transcript")
    gr.add_argument("--graph", default=None, help="graph file (default: the edges stored in the transcript)")
    gr.set_defaults(func=cmd_game_replay)

    rk = sub.add_parser("rank", parents=[common], help="flipper-rank versus splitter-rank")
    rk.add_argument("graph")
    rk.add_argument("--r", default="1")
    rk.add_argument("--k", type=int, default=1)
    rk.add_argument("--t", type=int, default=2)
    rk.set_defaults(func=cmd_rank)

    gen = sub.add_parser("gen", parents=[common], help="generate a graph")
    gen.add_argument("kind", choices=sorted(GENERATORS))
    gen.add_argument("--n", type=int, default=5)
    gen.add_argument("--rows", type=int, default=3)
    gen.add_argument("--cols", type=int, default=3)
    gen.add_argument("--p", type=float, default=0.3)
    gen.add_argument("--t", type=int, default=2)
    gen.add_argument("--seed", type=int, default=DEFAULT_SEED)
    gen.add_argument("--out-format", choices=["edgelist", "graph6"], default="edgelist")
    gen.set_defaults(func=cmd_gen)

    sw = sub.add_parser("sweep", parents=[common], help="run a named acceptance suite")
    sw.add_argument("suite", choices=sorted(SUITES))
    sw.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sw.add_argument("--jobs", type=int, default=1)
    sw.set_defaults(func=cmd_sweep)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code not in (0, None) else OK
    try:
        args.func(args)
    except Violation:
        return VIOLATION
    except PropertyViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        return VIOLATION
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return CAPS
    except NotKttFree as exc:
        print(json.dumps({"error": "not K_{t,t}-free", "t": exc.t,
                          "witness": [sorted(exc.witness[0]), sorted(exc.witness[1])]}), file=sys.stderr)
        return USAGE
    except (GraphFormatError, InvalidWitness, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    return OK


if __name__ == "__main__":
    sys.exit(main())
