"""Edge-list and graph6 reading/writing."""
from __future__ import annotations

import json
from pathlib import Path

from .errors import GraphFormatError
from .graph import Graph, Partition

GRAPH6_MAX_N = 62


def parse_edge_list(text: str) -> Graph:
    """First non-blank line ``n m``, then m lines ``u v`` (0-indexed)."""
    lines = [(i + 1, ln.split("#", 1)[0].strip()) for i, ln in enumerate(text.splitlines())]
    lines = [(no, ln) for no, ln in lines if ln]
    if not lines:
        raise GraphFormatError("empty edge list: expected header 'n m'", line=1)
    no, header = lines[0]
    parts = header.split()
    if len(parts) != 2:
        raise GraphFormatError(f"header must be 'n m', got {header!r}", line=no)
    try:
        n, m = int(parts[0]), int(parts[1])
    except ValueError:
        raise GraphFormatError(f"non-integer header {header!r}", line=no) from None
    if n < 0 or m < 0:
        raise GraphFormatError("negative n or m", line=no)
    body = lines[1:]
    if len(body) != m:
        where = body[m][0] if len(body) > m else (body[-1][0] if body else no)
        raise GraphFormatError(f"header declares {m} edges, found {len(body)}", line=where)
    adj = [0] * n
    for no, ln in body:
        parts = ln.split()
        if len(parts) != 2:
            raise GraphFormatError(f"edge line must be 'u v', got {ln!r}", line=no)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError(f"non-integer vertex in {ln!r}", line=no) from None
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(f"vertex out of range in {ln!r} (n={n})", line=no)
        if u == v:
            raise GraphFormatError(f"self-loop {ln!r}", line=no)
        if adj[u] >> v & 1:
            raise GraphFormatError(f"duplicate edge {ln!r}", line=no)
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    return Graph(n, tuple(adj))


def write_edge_list(G: Graph) -> str:
    edges = sorted(G.edges)
    return "".join([f"{G.n} {len(edges)}\n"] + [f"{u} {v}\n" for u, v in edges])


def parse_graph6(text: str) -> Graph:
    data = text.strip()
    offset = 0
    if data.startswith(">>graph6<<"):
        data = data[10:]
        offset = 10
    if not data:
        raise GraphFormatError("empty graph6 string", pos=offset)
    codes = []
    for i, ch in enumerate(data):
        c = ord(ch) - 63
        if not 0 <= c < 64:
            raise GraphFormatError(f"invalid graph6 character {ch!r}", pos=offset + i)
        codes.append(c)
    n = codes[0]
    if n == 63:
        raise GraphFormatError(f"graph6 long form (n > {GRAPH6_MAX_N}) is not supported", pos=offset)
    nbits = n * (n - 1) // 2
    need = (nbits + 5) // 6
    if len(codes) - 1 != need:
        raise GraphFormatError(f"graph6 body has {len(codes) - 1} bytes, expected {need} for n={n}",
                               pos=offset + min(len(codes), need + 1))
    bits = []
    for c in codes[1:]:
        bits.extend((c >> (5 - k)) & 1 for k in range(6))
    adj = [0] * n
    idx = 0
    for j in range(1, n):
        for i in range(j):
            if bits[idx]:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
            idx += 1
    if any(bits[nbits:]):
        raise GraphFormatError("nonzero padding bits in graph6 body", pos=offset + len(codes) - 1)
    return Graph(n, tuple(adj))


def write_graph6(G: Graph) -> str:
    if G.n > GRAPH6_MAX_N:
        raise ValueError(f"graph6 output limited to n <= {GRAPH6_MAX_N}; use the edge-list format")
    bits = [G.adj[i] >> j & 1 for j in range(1, G.n) for i in range(j)]
    bits += [0] * (-len(bits) % 6)
    out = [chr(G.n + 63)]
    for k in range(0, len(bits), 6):
        val = 0
        for b in bits[k:k + 6]:
            val = (val << 1) | b
        out.append(chr(val + 63))
    return "".join(out)


def detect_format(text: str) -> str:
    first = next((ln.strip() for ln in text.splitlines() if ln.strip()), "")
    parts = first.split()
    if len(parts) == 2 and all(p.lstrip("-").isdigit() for p in parts):
        return "edgelist"
    return "graph6"


def parse_graph(text: str, fmt: str = "auto") -> Graph:
    if fmt == "auto":
        fmt = detect_format(text)
    if fmt == "edgelist":
        return parse_edge_list(text)
    if fmt == "graph6":
        return parse_graph6(text)
    raise ValueError(f"unknown graph format {fmt!r}")


def write_graph(G: Graph, fmt: str = "edgelist") -> str:
    if fmt == "graph6":
        return write_graph6(G) + "\n"
    return write_edge_list(G)


def read_graph(path: str | Path, fmt: str = "auto") -> Graph:
    import sys
    text = sys.stdin.read() if str(path) == "-" else Path(path).read_text()
    return parse_graph(text, fmt)


def parse_partition(text: str, n: int) -> Partition:
    """JSON (``[[...], ...]`` or ``{"blocks": [...]}``) or one whitespace-separated block per line."""
    stripped = text.strip()
    if stripped.startswith(("[", "{")):
        data = json.loads(stripped)
        if isinstance(data, dict):
            data = data["blocks"]
        blocks = data
    else:
        blocks = []
        for no, ln in enumerate(text.splitlines(), 1):
            ln = ln.split("#", 1)[0].strip()
            if not ln:
                continue
            try:
                blocks.append([int(x) for x in ln.split()])
            except ValueError:
                raise GraphFormatError(f"non-integer vertex in block line {ln!r}", line=no) from None
    try:
        return Partition.from_blocks(n, blocks)
    except ValueError as exc:
        raise GraphFormatError(f"bad partition: {exc}") from None
