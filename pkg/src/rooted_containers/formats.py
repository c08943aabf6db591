"""Plain-text formats.

* ``rooted-hg M r`` followed by ``u v w h`` lines (hypergraphs)
* ``graph N`` followed by ``u v`` lines (graphs on ``range(N)``)
* ``family n`` followed by one bitmask per line, base 10 or ``0b`` binary
* ``iset`` followed by one vertex id per line (independent-set candidates)

Blank lines and ``#`` comments are ignored everywhere.
"""

from __future__ import annotations

from collections.abc import Iterable

from .hypergraph import Graph, RootedHypergraph, build_hypergraph


class FormatError(ValueError):
    """Raised on malformed input text; the message carries the line number."""


def _content_lines(text: str) -> list[tuple[int, list[str]]]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append((lineno, line.split()))
    return out


def _int(token: str, lineno: int) -> int:
    try:
        return int(token, 0) if token.lower().startswith(("0b", "0x")) else int(token, 10)
    except ValueError:
        raise FormatError(f"line {lineno}: not an integer: {token!r}") from None


def _header(lines: list[tuple[int, list[str]]], keyword: str, arity: int) -> list[int]:
    if not lines:
        raise FormatError(f"empty input; expected header '{keyword}'")
    lineno, tokens = lines[0]
    if tokens[0] != keyword or len(tokens) != arity + 1:
        raise FormatError(f"line {lineno}: expected header '{keyword}' with {arity} argument(s)")
    return [_int(tok, lineno) for tok in tokens[1:]]


def dump_hypergraph(hg: RootedHypergraph) -> str:
    if not hg.is_dense:
        raise ValueError("text format needs vertex set range(M); relabel first")
    rows = [f"rooted-hg {hg.num_vertices} {hg.r}"]
    rows.extend(f"{u} {v} {w} {h}" for u, v, w, h in hg.edge_array.tolist())
    return "\n".join(rows) + "\n"


def parse_hypergraph(text: str) -> RootedHypergraph:
    lines = _content_lines(text)
    m, r = _header(lines, "rooted-hg", 2)
    edges = []
    for lineno, tokens in lines[1:]:
        if len(tokens) != 4:
            raise FormatError(f"line {lineno}: expected 'u v w h', got {len(tokens)} fields")
        edges.append(tuple(_int(tok, lineno) for tok in tokens))
    try:
        return build_hypergraph(m, edges, r)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def dump_graph(g: Graph, n: int | None = None) -> str:
    if n is None:
        n = max(g.vertices, default=-1) + 1
    rows = [f"graph {n}"]
    for a, b, c in g.edges_with_multiplicity():
        rows.extend([f"{a} {b}"] * c)
    return "\n".join(rows) + "\n"


def parse_graph(text: str) -> Graph:
    lines = _content_lines(text)
    (n,) = _header(lines, "graph", 1)
    edges = []
    for lineno, tokens in lines[1:]:
        if len(tokens) != 2:
            raise FormatError(f"line {lineno}: expected 'u v'")
        a, b = (_int(tok, lineno) for tok in tokens)
        if not (0 <= a < n and 0 <= b < n) or a == b:
            raise FormatError(f"line {lineno}: bad edge {a} {b}")
        edges.append((a, b))
    return Graph(range(n), edges)


def dump_family(n: int, members: Iterable[int]) -> str:
    return "\n".join([f"family {n}", *(str(x) for x in sorted(set(members)))]) + "\n"


def parse_family(text: str) -> tuple[int, frozenset[int]]:
    lines = _content_lines(text)
    (n,) = _header(lines, "family", 1)
    members = set()
    for lineno, tokens in lines[1:]:
        if len(tokens) != 1:
            raise FormatError(f"line {lineno}: expected one bitmask per line")
        mask = _int(tokens[0], lineno)
        if not 0 <= mask < (1 << n):
            raise FormatError(f"line {lineno}: mask {mask} outside P({n})")
        members.add(mask)
    return n, frozenset(members)


def parse_vertex_set(text: str) -> frozenset[int]:
    """Read an ``iset`` file; a ``family n`` file is accepted as well."""
    lines = _content_lines(text)
    if lines and lines[0][1][0] == "family":
        return parse_family(text)[1]
    _header(lines, "iset", 0)
    out = set()
    for lineno, tokens in lines[1:]:
        out.update(_int(tok, lineno) for tok in tokens)
    return frozenset(out)


def dump_vertex_set(members: Iterable[int]) -> str:
    return "\n".join(["iset", *(str(x) for x in sorted(set(members)))]) + "\n"
