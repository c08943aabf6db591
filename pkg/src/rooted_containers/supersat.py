"""Kneser graphs, expander mixing, the bounded-degree embedding and permutation audits.

Sets are bitmasks over ground elements ``0..n-1``; a permutation is a
sequence of those elements.
"""

from __future__ import annotations

import json
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from itertools import combinations, permutations

import numpy as np

from .engine import EligibilityWitness, eligibility_witness
from .hypergraph import Graph
from .unionfree import build_union_hypergraph

KNESER_MAX_VERTICES = 10_000
EIGEN_MAX_VERTICES = 1_000
EML_EXHAUSTIVE_MAX = 20
AUDIT_MAX_N = 8
HORRIBLE_GAP = 11
SUPERSAT_T_DIVISOR = 10**40


@dataclass(frozen=True)
class KneserStats:
    m: int
    k: int
    N: int
    D: int
    lambda_formula: float

    @classmethod
    def of(cls, m: int, k: int) -> KneserStats:
        d = math.comb(m - k, k)
        lam = -k / (m - k) * d if m > k else 0.0
        return cls(m, k, math.comb(m, k), d, lam)


def kneser_graph(m: int, k: int) -> Graph:
    """KG(m, k): k-subsets of range(m) as bitmasks, adjacent when disjoint."""
    if k < 1 or 2 * k > m:
        raise ValueError("need 1 <= k and 2k <= m")
    if math.comb(m, k) > KNESER_MAX_VERTICES:
        raise ValueError(f"C({m},{k}) exceeds {KNESER_MAX_VERTICES} vertices")
    verts = [sum(1 << i for i in c) for c in combinations(range(m), k)]
    edges = [(a, b) for a, b in combinations(verts, 2) if a & b == 0]
    return Graph(verts, edges)


def kneser_adjacency(m: int, k: int) -> np.ndarray:
    """Dense adjacency matrix of KG(m, k), rows in ascending bitmask order."""
    if k < 1 or 2 * k > m:
        raise ValueError("need 1 <= k and 2k <= m")
    if math.comb(m, k) > KNESER_MAX_VERTICES:
        raise ValueError(f"C({m},{k}) exceeds {KNESER_MAX_VERTICES} vertices")
    verts = np.array(sorted(sum(1 << i for i in c) for c in combinations(range(m), k)), dtype=object)
    if m < 63:
        verts = verts.astype(np.int64)
    return ((verts[:, None] & verts[None, :]) == 0).astype(np.float64)


def kneser_min_eigenvalue(m: int, k: int) -> float:
    """Smallest adjacency eigenvalue of KG(m, k) from a dense symmetric eigensolve."""
    adj = kneser_adjacency(m, k)
    if adj.shape[0] > EIGEN_MAX_VERTICES:
        raise ValueError(f"eigensolve limited to {EIGEN_MAX_VERTICES} vertices")
    return float(np.linalg.eigvalsh(adj)[0])


def adjacency_matrix(g: Graph) -> tuple[list[int], np.ndarray]:
    order = sorted(g.vertices)
    pos = {v: i for i, v in enumerate(order)}
    adj = np.zeros((len(order), len(order)))
    for a, b, c in g.edges_with_multiplicity():
        adj[pos[a], pos[b]] += c
        adj[pos[b], pos[a]] += c
    return order, adj


def min_eigenvalue(g: Graph) -> float:
    if len(g.vertices) > EIGEN_MAX_VERTICES:
        raise ValueError(f"eigensolve limited to {EIGEN_MAX_VERTICES} vertices")
    if not g.vertices:
        raise ValueError("empty graph")
    return float(np.linalg.eigvalsh(adjacency_matrix(g)[1])[0])


def eml_lower_bound(d: float, n: int, lam: float, size: int) -> float:
    """Expander-mixing lower bound on e(G[S]) for a D-regular graph on N vertices."""
    if not 0 <= size <= n:
        raise ValueError("need 0 <= |S| <= N")
    return d / (2 * n) * size**2 + lam / (2 * n) * size * (n - size)


@dataclass(frozen=True)
class EmlCheck:
    passed: bool
    checked: int
    violations: int
    worst_slack: float
    worst_subset: tuple[int, ...]


def _induced_edge_counts(adj_pairs: np.ndarray, subsets: np.ndarray) -> np.ndarray:
    counts = np.zeros(subsets.shape[0], dtype=np.int64)
    for i, j in adj_pairs:
        counts += ((subsets >> i) & (subsets >> j) & 1).astype(np.int64)
    return counts


def verify_eml_exhaustive(
    g: Graph,
    d: float,
    lam: float,
    samples: int | None = None,
    seed: int = 0,
    tol: float = 1e-6,
) -> EmlCheck:
    """Check e(G[S]) >= bound for every subset S, or ``samples`` random subsets.

    Exhaustive checking is used when |V| <= 20 and ``samples`` is None.
    """
    order = sorted(g.vertices)
    n = len(order)
    pos = {v: i for i, v in enumerate(order)}
    pairs = np.array(
        [(pos[a], pos[b]) for a, b, c in g.edges_with_multiplicity() for _ in range(c)], dtype=np.int64
    ).reshape(-1, 2)
    if samples is None:
        if n > EML_EXHAUSTIVE_MAX:
            raise ValueError(f"exhaustive mode limited to {EML_EXHAUSTIVE_MAX} vertices; pass samples=")
        subsets = np.arange(1 << n, dtype=np.int64)
    else:
        if n > 62:
            raise ValueError("sampled mode limited to 62 vertices")
        rng = np.random.default_rng(seed)
        bits = rng.integers(0, 2, size=(samples, n), dtype=np.int64)
        subsets = (bits << np.arange(n, dtype=np.int64)).sum(axis=1)
    induced = _induced_edge_counts(pairs, subsets)
    sizes = np.bitwise_count(subsets.astype(np.uint64)).astype(np.float64)
    bound = d / (2 * n) * sizes**2 + lam / (2 * n) * sizes * (n - sizes)
    slack = induced - bound
    worst = int(np.argmin(slack))
    subset = tuple(order[i] for i in range(n) if int(subsets[worst]) >> i & 1)
    violations = int(np.count_nonzero(slack < -tol))
    return EmlCheck(violations == 0, int(subsets.shape[0]), violations, float(slack[worst]), subset)


def kneser_induced_bound(m: int, k: int, family_size: int) -> float:
    """Edges guaranteed inside any family_size vertices of KG(m, k) (needs family_size > C(m-1, k-1))."""
    star = math.comb(m - 1, k - 1)
    if family_size <= star:
        raise ValueError(f"family size {family_size} <= C({m - 1},{k - 1}) = {star}: lemma inapplicable")
    stats = KneserStats.of(m, k)
    one_plus_beta = family_size / star
    return (1 - 1 / one_plus_beta) * stats.D * m / (stats.N * (m - k)) * math.comb(family_size, 2)


def union_pair_graph(family: Iterable[int], a: int, k: int) -> Graph:
    """Members B of the family with B inside A and |A - B| = k, joined when B1 | B2 == A."""
    verts = sorted(b for b in set(family) if b & a == b and (a & ~b).bit_count() == k)
    edges = [(b1, b2) for b1, b2 in combinations(verts, 2) if b1 | b2 == a]
    return Graph(verts, edges)


def embed_bounded_subgraph(g: Graph, m: int) -> Graph:
    """Subgraph with max degree <= m and at least m^2/2 edges.

    ``S`` is the m largest-degree vertices (ties by id). Requires
    e(G - S) >= m^2. Returns G - S when its max degree is at most m,
    otherwise stars from s_1, ..., s_m to the smallest available neighbours.
    """
    if m < 1:
        raise ValueError("m must be positive")
    if len(g.vertices) < m:
        raise ValueError("graph has fewer than m vertices")
    deg = g.degrees()
    top = sorted(g.vertices, key=lambda v: (-deg[v], v))[:m]
    rest = g.remove_vertices(top)
    if rest.num_edges < m * m:
        raise ValueError(f"precondition e(G - S) >= m^2 fails: {rest.num_edges} < {m * m}")
    if rest.max_degree() <= m:
        return rest
    edges = []
    for i, s_i in enumerate(top):
        pool = sorted(g.neighbors(s_i) - set(top[:i]))
        need = m - i
        if len(pool) < need:
            raise AssertionError("largest-degree vertex has too few neighbours")
        edges.extend((s_i, u) for u in pool[:need])
    return Graph(g.vertices, edges)


def prefix_masks(perm: Sequence[int]) -> list[int]:
    out = [0]
    for x in perm:
        out.append(out[-1] | (1 << x))
    return out


def classify_permutation(
    perm: Sequence[int],
    a: int,
    family: Iterable[int],
    include_empty: bool = True,
    horrible_gap: int = HORRIBLE_GAP,
) -> str:
    """``not-a-pair``, ``good``, ``bad`` or ``horrible`` for the pair (perm, A).

    With ``include_empty`` the empty set counts as an initial segment, so
    an empty member of the family makes every pair with a nonempty A bad.
    """
    fam = set(family)
    size = a.bit_count()
    prefixes = prefix_masks(perm)
    if prefixes[size] != a:
        return "not-a-pair"
    start = 0 if include_empty else 1
    blockers = [b for b in prefixes[start:size] if b in fam]
    if not blockers:
        return "good"
    if any(size - b.bit_count() >= horrible_gap for b in blockers):
        return "horrible"
    return "bad"


@dataclass
class SetAudit:
    A: int
    size: int
    pairs: int
    bad: int
    horrible: int
    horrible_prefixes: int | None = None
    alpha: float | None = None

    def to_dict(self) -> dict:
        return {
            "A": self.A,
            "size": self.size,
            "pairs": self.pairs,
            "S_A": self.bad,
            "horrible": self.horrible,
            "H_A": self.horrible_prefixes,
            "alpha_A": self.alpha,
        }


@dataclass
class PermutationAudit:
    n: int
    family: list[int]
    records: list[SetAudit]
    max_good_per_permutation: int
    good_total: int
    lhs: int
    n_factorial: int
    delta: int | None = None
    include_empty: bool = True
    horrible_gap: int = HORRIBLE_GAP
    notes: list[str] = field(default_factory=list)

    @property
    def unique_good(self) -> bool:
        return self.max_good_per_permutation <= 1

    @property
    def inequality_holds(self) -> bool:
        return self.lhs <= self.n_factorial

    @property
    def passed(self) -> bool:
        return self.unique_good and self.inequality_holds

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "family": self.family,
            "delta": self.delta,
            "include_empty": self.include_empty,
            "horrible_gap": self.horrible_gap,
            "max_good_per_permutation": self.max_good_per_permutation,
            "good_total": self.good_total,
            "sum": self.lhs,
            "n_factorial": self.n_factorial,
            "unique_good": self.unique_good,
            "inequality_holds": self.inequality_holds,
            "passed": self.passed,
            "records": [r.to_dict() for r in self.records],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))


def audit_counting_identity(
    family: Iterable[int],
    n: int,
    delta: int | None = None,
    include_empty: bool = True,
    horrible_gap: int = HORRIBLE_GAP,
) -> PermutationAudit:
    """Enumerate all n! permutations and classify them against every member of the family.

    For each A: pairs = |A|!(n-|A|)!, S_A = number of bad permutations. The
    audit reports whether every permutation is good for at most one A and
    whether sum_A (|A|!(n-|A|)! - S_A) <= n!.

    With an integer ``delta`` the audit also collects H_A, the delta-prefix
    sets of horrible permutations, and alpha_A from
    |H_A| = C(|A|-1, delta)(1 + alpha_A) (only for |A| > delta).
    """
    if not 0 <= n <= AUDIT_MAX_N:
        raise ValueError(f"audit limited to n <= {AUDIT_MAX_N}")
    fam = sorted(set(family))
    if any(x >> n for x in fam):
        raise ValueError("family member outside P(n)")
    if delta is not None and delta < 0:
        raise ValueError("delta must be nonnegative")
    fam_set = set(fam)
    bad = dict.fromkeys(fam, 0)
    horrible = dict.fromkeys(fam, 0)
    hprefix: dict[int, set[int]] = {a: set() for a in fam}
    start = 0 if include_empty else 1
    max_good = 0
    good_total = 0
    for perm in permutations(range(n)):
        prefixes = prefix_masks(perm)
        good_here = 0
        seen: list[int] = []
        for j, p in enumerate(prefixes):
            if p not in fam_set:
                continue
            earlier = seen
            if not earlier:
                good_here += 1
            else:
                bad[p] += 1
                if any(j - b.bit_count() >= horrible_gap for b in earlier):
                    horrible[p] += 1
                    if delta is not None and delta <= j:
                        hprefix[p].add(prefixes[delta])
            if j >= start:
                seen.append(p)
        max_good = max(max_good, good_here)
        good_total += good_here
    records = []
    lhs = 0
    for a in fam:
        size = a.bit_count()
        pairs = math.factorial(size) * math.factorial(n - size)
        lhs += pairs - bad[a]
        rec = SetAudit(a, size, pairs, bad[a], horrible[a])
        if delta is not None:
            rec.horrible_prefixes = len(hprefix[a])
            if size - 1 >= delta:
                rec.alpha = len(hprefix[a]) / math.comb(size - 1, delta) - 1
        records.append(rec)
    return PermutationAudit(
        n, fam, records, max_good, good_total, lhs, math.factorial(n), delta, include_empty, horrible_gap
    )


@dataclass(frozen=True)
class SupersatConfig:
    n: int
    eps: float
    delta: float
    delta1: float
    delta2: float
    t: float

    @classmethod
    def of(cls, n: int, eps: float) -> SupersatConfig:
        if n < 2:
            raise ValueError("n must be at least 2")
        spread = math.sqrt(n * math.log(n))
        return cls(n, eps, n / 2 - spread, n / 2 - spread / 2, n / 2 + spread / 2, eps**2 * n**2 / SUPERSAT_T_DIVISOR)


def eligibility_from_supersat(
    family: Iterable[int],
    eps: float,
    n: int,
    s: float | None = None,
    t: float | None = None,
) -> EligibilityWitness | None:
    """First member of the family (ascending id) that is (F, s, t)-eligible in the union hypergraph.

    Defaults are s = n and t = eps^2 n^2 / 10^40.
    """
    fam = sorted(set(family))
    s = n if s is None else s
    if t is None:
        t = eps**2 * n**2 / SUPERSAT_T_DIVISOR
    hg = build_union_hypergraph(n)
    for v in fam:
        witness = eligibility_witness(hg, fam, v, s, t, mode="exact")
        if witness is not None:
            return witness
    return None


__all__ = [
    "HORRIBLE_GAP",
    "KneserStats",
    "PermutationAudit",
    "SupersatConfig",
    "adjacency_matrix",
    "audit_counting_identity",
    "classify_permutation",
    "eligibility_from_supersat",
    "eml_lower_bound",
    "embed_bounded_subgraph",
    "kneser_adjacency",
    "kneser_graph",
    "kneser_min_eigenvalue",
    "kneser_induced_bound",
    "min_eigenvalue",
    "union_pair_graph",
    "verify_eml_exhaustive",
]
