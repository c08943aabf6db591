"""Rooted 3-uniform hypergraphs and the simple (multi)graphs derived from them.

Vertices are dense integer ids. A hypergraph built with ``build_hypergraph``
lives on ``range(M)``; induced subhypergraphs keep the original ids and carry
their vertex set explicitly.

Edges are held in an ``(E, 4)`` int64 array with rows ``(u, v, w, head)``,
``u < v < w``, sorted lexicographically. A triple may appear with up to three
different heads.
"""

from __future__ import annotations

from collections import Counter
from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field

import numpy as np


class Graph:
    """Undirected multigraph without loops.

    Edges are normalised to ``(min, max)``; repeating an edge raises its
    multiplicity. Instances are treated as immutable.
    """

    __slots__ = ("vertices", "_mult")

    def __init__(self, vertices: Iterable[int] = (), edges: Iterable[tuple[int, int]] = ()):
        verts = set(vertices)
        mult: Counter[tuple[int, int]] = Counter()
        for a, b in edges:
            if a == b:
                raise ValueError(f"self-loop at {a}")
            key = (a, b) if a < b else (b, a)
            mult[key] += 1
            verts.add(a)
            verts.add(b)
        self.vertices = frozenset(verts)
        self._mult = dict(mult)

    @classmethod
    def from_multiplicities(cls, vertices: Iterable[int], mult: dict[tuple[int, int], int]) -> Graph:
        g = cls(vertices)
        g._mult = {k: c for k, c in mult.items() if c > 0}
        g.vertices = g.vertices.union(*(set(k) for k in g._mult))
        return g

    def edge_list(self) -> list[tuple[int, int]]:
        """Distinct edges in lexicographic order."""
        return sorted(self._mult)

    def edges_with_multiplicity(self) -> list[tuple[int, int, int]]:
        return [(a, b, self._mult[(a, b)]) for a, b in sorted(self._mult)]

    def multiplicity(self, a: int, b: int) -> int:
        return self._mult.get((a, b) if a < b else (b, a), 0)

    @property
    def num_edges(self) -> int:
        return sum(self._mult.values())

    def degrees(self) -> dict[int, int]:
        deg = dict.fromkeys(self.vertices, 0)
        for (a, b), c in self._mult.items():
            deg[a] += c
            deg[b] += c
        return deg

    def degree(self, v: int) -> int:
        return sum(c for (a, b), c in self._mult.items() if v in (a, b))

    def neighbors(self, v: int) -> set[int]:
        out = set()
        for a, b in self._mult:
            if a == v:
                out.add(b)
            elif b == v:
                out.add(a)
        return out

    def max_degree(self) -> int:
        return max(self.degrees().values(), default=0)

    def is_simple(self) -> bool:
        return all(c == 1 for c in self._mult.values())

    def remove_vertices(self, removed: Iterable[int]) -> Graph:
        gone = set(removed)
        keep = {k: c for k, c in self._mult.items() if k[0] not in gone and k[1] not in gone}
        return Graph.from_multiplicities(self.vertices - gone, keep)

    def induced(self, keep: Iterable[int]) -> Graph:
        return self.remove_vertices(self.vertices - set(keep))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.vertices == other.vertices and self._mult == other._mult

    def __hash__(self) -> int:
        return hash((self.vertices, frozenset(self._mult.items())))

    def __repr__(self) -> str:
        return f"Graph(|V|={len(self.vertices)}, e={self.num_edges})"


_EMPTY_EDGES = np.zeros((0, 4), dtype=np.int64)


@dataclass(frozen=True, eq=False)
class RootedHypergraph:
    """3-uniform hypergraph with a head tagged on every edge.

    ``vertices`` is the sorted vertex tuple and ``edge_array`` the canonical
    edge table. Rootedness with parameter ``r`` is not enforced here; see
    :func:`verify_rooted`.
    """

    vertices: tuple[int, ...]
    edge_array: np.ndarray
    r: int = 1
    _head_index: dict[int, list[tuple[int, int]]] | None = field(default=None, repr=False, compare=False)
    _pair_array: np.ndarray | None = field(default=None, repr=False, compare=False)
    _head_layout: tuple[np.ndarray, ...] | None = field(default=None, repr=False, compare=False)

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    @property
    def num_edges(self) -> int:
        return int(self.edge_array.shape[0])

    @property
    def edges(self) -> list[tuple[int, int, int, int]]:
        return [tuple(int(x) for x in row) for row in self.edge_array]

    @property
    def is_dense(self) -> bool:
        """True when the vertex set is exactly ``range(num_vertices)``."""
        n = len(self.vertices)
        return n == 0 or (self.vertices[0] == 0 and self.vertices[-1] == n - 1)

    def head_pairs(self, v: int) -> list[tuple[int, int]]:
        """Non-head vertex pairs of the edges headed at ``v``, in canonical order."""
        if self._head_index is None:
            index: dict[int, list[tuple[int, int]]] = {}
            for row in self.edge_array.tolist():
                u1, u2, u3, h = row
                if h == u1:
                    pair = (u2, u3)
                elif h == u2:
                    pair = (u1, u3)
                else:
                    pair = (u1, u2)
                index.setdefault(h, []).append(pair)
            object.__setattr__(self, "_head_index", index)
        return self._head_index.get(v, [])

    def non_head_pairs(self) -> np.ndarray:
        """(E, 2) array of the non-head pair of every edge, row-aligned with ``edge_array``."""
        if self._pair_array is None:
            object.__setattr__(self, "_pair_array", _non_head_pairs(self.edge_array))
        return self._pair_array

    def head_layout(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """Edges regrouped by head: (heads, starts, head column, pair column 0, pair column 1).

        ``heads`` lists each distinct head once and ``starts`` gives the first
        row of its block, ready for ``np.add.reduceat``.
        """
        if self._head_layout is None:
            col = self.edge_array[:, 3]
            order = np.argsort(col, kind="stable")
            pairs = self.non_head_pairs()[order]
            by_head = np.ascontiguousarray(col[order])
            heads, starts = np.unique(by_head, return_index=True)
            layout = (heads, starts, by_head, np.ascontiguousarray(pairs[:, 0]), np.ascontiguousarray(pairs[:, 1]))
            object.__setattr__(self, "_head_layout", layout)
        return self._head_layout

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RootedHypergraph):
            return NotImplemented
        return (
            self.vertices == other.vertices
            and self.r == other.r
            and np.array_equal(self.edge_array, other.edge_array)
        )

    def __repr__(self) -> str:
        return f"RootedHypergraph(|V|={self.num_vertices}, e={self.num_edges}, r={self.r})"


def _canonical_edges(arr: np.ndarray) -> np.ndarray:
    if arr.shape[0] == 0:
        return _EMPTY_EDGES.copy()
    tri = np.sort(arr[:, :3], axis=1)
    out = np.column_stack([tri, arr[:, 3]]).astype(np.int64)
    order = np.lexsort((out[:, 3], out[:, 2], out[:, 1], out[:, 0]))
    out = out[order]
    keep = np.ones(out.shape[0], dtype=bool)
    keep[1:] = np.any(out[1:] != out[:-1], axis=1)
    return np.ascontiguousarray(out[keep])


def _from_canonical(vertices: Iterable[int], edges: np.ndarray, r: int) -> RootedHypergraph:
    return RootedHypergraph(tuple(sorted(vertices)), edges, r)


def build_hypergraph(
    vertex_count: int, edges: Iterable[tuple[int, int, int, int]] | np.ndarray, r: int = 1
) -> RootedHypergraph:
    """Validate, canonicalise and deduplicate ``(u, v, w, head)`` rows."""
    if vertex_count < 0:
        raise ValueError("vertex_count must be nonnegative")
    if r < 1:
        raise ValueError("r must be a positive integer")
    arr = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges, dtype=np.int64)
    if arr.size == 0:
        arr = _EMPTY_EDGES
    if arr.ndim != 2 or arr.shape[1] != 4:
        raise ValueError("edges must be (u, v, w, head) rows")
    tri = arr[:, :3]
    if np.any((tri < 0) | (tri >= vertex_count)):
        bad = arr[np.any((tri < 0) | (tri >= vertex_count), axis=1)][0]
        raise ValueError(f"vertex out of range in edge {tuple(bad.tolist())}")
    repeated = (tri[:, 0] == tri[:, 1]) | (tri[:, 0] == tri[:, 2]) | (tri[:, 1] == tri[:, 2])
    if np.any(repeated):
        raise ValueError(f"repeated vertex in a triple: {tuple(arr[repeated][0].tolist())}")
    in_triple = (arr[:, 3:4] == tri).any(axis=1)
    if not np.all(in_triple):
        raise ValueError(f"head not in triple: {tuple(arr[~in_triple][0].tolist())}")
    return _from_canonical(range(vertex_count), _canonical_edges(arr), r)


@dataclass(frozen=True)
class RootednessReport:
    ok: bool
    r: int
    pair: tuple[int, int] | None = None
    offending_edges: list[tuple[int, int, int, int]] = field(default_factory=list)
    max_load: int = 0

    def __bool__(self) -> bool:
        return self.ok


def _non_head_pairs(edges: np.ndarray) -> np.ndarray:
    """The two vertices of each edge other than its head, as sorted (a, b) rows."""
    tri, head = edges[:, :3], edges[:, 3:4]
    not_head = tri != head
    # exactly two entries per row survive; rows are already sorted
    return tri[not_head].reshape(-1, 2)


def verify_rooted(hg: RootedHypergraph, r: int | None = None) -> RootednessReport:
    """Check that every vertex pair lies in at most ``r`` edges headed outside the pair.

    An edge is headed outside a pair {x, y} exactly when {x, y} is its
    non-head pair, so it suffices to count non-head pairs.
    """
    r = hg.r if r is None else r
    if hg.num_edges == 0:
        return RootednessReport(True, r)
    pairs = hg.non_head_pairs()
    base = int(max(hg.vertices)) + 1
    keys = pairs[:, 0] * base + pairs[:, 1]
    uniq, counts = np.unique(keys, return_counts=True)
    worst = int(np.argmax(counts))
    max_load = int(counts[worst])
    if max_load <= r:
        return RootednessReport(True, r, max_load=max_load)
    # report the smallest violating pair for determinism
    first = int(np.flatnonzero(counts > r)[0])
    key = int(uniq[first])
    pair = (key // base, key % base)
    hits = np.flatnonzero(keys == key)
    offending = [tuple(int(x) for x in hg.edge_array[i]) for i in hits]
    return RootednessReport(False, r, pair, offending, max_load)


def head_link_graph(hg: RootedHypergraph, v: int, available: Iterable[int] | None = None) -> Graph:
    """Graph on ``available`` of pairs {u1, u2} such that {v, u1, u2} is an edge headed at v."""
    verts = set(hg.vertices if available is None else available)
    verts.discard(v)
    pairs = [(a, b) for a, b in hg.head_pairs(v) if a in verts and b in verts]
    return Graph(verts, pairs)


def head_degree(hg: RootedHypergraph, v: int) -> int:
    return len(hg.head_pairs(v))


def induced(hg: RootedHypergraph, keep: Iterable[int]) -> RootedHypergraph:
    """Subhypergraph on ``keep`` (intersected with the vertex set), heads preserved."""
    keep_set = set(keep).intersection(hg.vertices)
    if hg.num_edges == 0 or not keep_set:
        return _from_canonical(keep_set, _EMPTY_EDGES.copy(), hg.r)
    mask = np.zeros(int(max(hg.vertices)) + 1, dtype=bool)
    mask[list(keep_set)] = True
    tri = hg.edge_array[:, :3]
    rows = mask[tri[:, 0]] & mask[tri[:, 1]] & mask[tri[:, 2]]
    return _from_canonical(keep_set, np.ascontiguousarray(hg.edge_array[rows]), hg.r)


def membership_mask(hg: RootedHypergraph, members: Iterable[int]) -> np.ndarray:
    size = int(max(hg.vertices, default=-1)) + 1
    mask = np.zeros(max(size, 1), dtype=bool)
    idx = [x for x in members if 0 <= x < size]
    mask[idx] = True
    return mask


def is_independent(hg: RootedHypergraph, members: Iterable[int]) -> bool:
    """True iff no edge has all three vertices in ``members``."""
    if hg.num_edges == 0:
        return True
    mask = membership_mask(hg, members)
    tri = hg.edge_array[:, :3]
    return not bool(np.any(mask[tri[:, 0]] & mask[tri[:, 1]] & mask[tri[:, 2]]))


def edges_inside(hg: RootedHypergraph, members: Iterable[int]) -> Iterator[tuple[int, int, int, int]]:
    """Edges of ``hg`` lying entirely inside ``members``."""
    if hg.num_edges == 0:
        return iter(())
    mask = membership_mask(hg, members)
    tri = hg.edge_array[:, :3]
    rows = np.flatnonzero(mask[tri[:, 0]] & mask[tri[:, 1]] & mask[tri[:, 2]])
    return (tuple(int(x) for x in hg.edge_array[i]) for i in rows)


def count_independent_sets(hg: RootedHypergraph, max_vertices: int = 24) -> int:
    """Number of independent sets, by testing every edge against all 2^|V| subsets."""
    n = hg.num_vertices
    if n > max_vertices:
        raise ValueError(f"{n} vertices exceeds the exhaustive limit {max_vertices}")
    pos = {v: i for i, v in enumerate(hg.vertices)}
    subsets = np.arange(1 << n, dtype=np.int64)
    bad = np.zeros(subsets.shape[0], dtype=bool)
    for u, v, w, _h in hg.edge_array.tolist():
        emask = (1 << pos[u]) | (1 << pos[v]) | (1 << pos[w])
        bad |= (subsets & emask) == emask
    return int(subsets.shape[0] - np.count_nonzero(bad))
