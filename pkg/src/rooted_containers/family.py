"""Iterated containers, entropy bounds on the container count, and test instances."""

from __future__ import annotations

import json
import math
import random
from collections.abc import Iterable
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .engine import NotIndependentError, Params, reconstruct, run_container
from .hypergraph import RootedHypergraph, build_hypergraph, induced, is_independent

ENTROPY_TOL = 1e-12


def binary_entropy(p: float | Fraction) -> float:
    """Base-2 binary entropy with H(0) = H(1) = 0."""
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"entropy argument {p} outside [0, 1]")
    if p in (0.0, 1.0):
        return 0.0
    return -p * math.log2(p) - (1.0 - p) * math.log2(1.0 - p)


def sum_binomials(m: int, k: int) -> int:
    """Exact value of sum_{i <= k} C(m, i)."""
    if not 0 <= k <= m:
        raise ValueError(f"need 0 <= k <= m, got m={m}, k={k}")
    total, term = 0, 1
    for i in range(k + 1):
        total += term
        term = term * (m - i) // (i + 1)
    return total


@dataclass(frozen=True)
class EntropyCheck:
    holds: bool
    m: int
    zeta: float
    k: int
    binomial_sum: int
    entropy_exponent: float

    @property
    def rhs(self) -> float:
        return 2.0**self.entropy_exponent


def check_entropy_bound(m: int, zeta: float | Fraction, slack: float = 1e-9) -> EntropyCheck:
    """Compare sum_{i <= floor(zeta*m)} C(m, i) with 2^(H(zeta) m).

    The left side is exact; the comparison is done on log2 values with a
    relative ``slack`` on the right-hand exponent.
    """
    z = Fraction(zeta) if not isinstance(zeta, float) else Fraction(repr(zeta))
    if not 0 < z <= Fraction(1, 2):
        raise ValueError("zeta must lie in (0, 1/2]")
    k = math.floor(z * m)
    lhs = sum_binomials(m, k)
    exponent = binary_entropy(z) * m
    holds = math.log2(lhs) <= exponent * (1 + slack) + slack
    return EntropyCheck(holds, m, float(z), k, lhs, exponent)


@dataclass(frozen=True)
class BoundReport:
    eps: Fraction
    s: Fraction
    t: Fraction
    N: Fraction
    M: int
    r: int
    tau: Fraction
    beta: Fraction
    gamma: Fraction
    p: int
    log2_bound: float
    geometric_log2_bound: float

    def to_dict(self) -> dict:
        return {
            "eps": str(self.eps),
            "s": str(self.s),
            "t": str(self.t),
            "N": str(self.N),
            "M": self.M,
            "r": self.r,
            "tau": str(self.tau),
            "beta": str(self.beta),
            "gamma": str(self.gamma),
            "p": self.p,
            "log2_bound": self.log2_bound,
            "geometric_log2_bound": self.geometric_log2_bound,
        }


def levels_needed(m: int | Fraction, n_target: Fraction, gamma: Fraction) -> int:
    """Least integer p with gamma^p * m <= n_target."""
    if m <= n_target:
        return 0
    guess = max(0, math.floor(math.log(float(n_target) / float(m)) / math.log(float(gamma))) - 2)
    cur = Fraction(m) * gamma**guess
    p = guess
    while cur > n_target:
        cur *= gamma
        p += 1
    while p > 0 and cur / gamma <= n_target:
        cur /= gamma
        p -= 1
    return p


def container_count_bound(params: Params) -> BoundReport:
    """Upper bound on log2 of the container count, (2M/eps)(H(tau) + H(beta)).

    ``geometric_log2_bound`` is the level-by-level sum the closed form
    dominates: (H(tau) + H(beta)) * sum_{i <= p} M gamma^i.
    """
    if params.M is None:
        raise ValueError("params.M is required")
    tau, beta = 2 * params.s / params.t, params.beta
    if tau > Fraction(1, 2) or beta > Fraction(1, 2):
        raise ValueError(f"entropy bound inapplicable: tau={tau}, beta={beta} (need <= 1/2)")
    gamma = 1 - params.eps / 2
    p = levels_needed(params.M, params.N, gamma)
    h = binary_entropy(tau) + binary_entropy(beta)
    closed = 2 * params.M / float(params.eps) * h
    geometric = h * params.M * sum(float(gamma) ** i for i in range(p + 1))
    return BoundReport(
        params.eps, params.s, params.t, params.N, params.M, params.r, tau, beta, gamma, p, closed, geometric
    )


@dataclass(frozen=True)
class LevelRecord:
    host_size: int
    T: frozenset[int]
    T_prime: frozenset[int]
    container_size: int
    certified: bool
    stop_phase: str
    invariant_failures: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "host_size": self.host_size,
            "T": sorted(self.T),
            "T_prime": sorted(self.T_prime),
            "container_size": self.container_size,
            "certified": self.certified,
            "stop_phase": self.stop_phase,
            "invariant_failures": list(self.invariant_failures),
        }


@dataclass
class ContainerRecord:
    container: frozenset[int]
    levels: list[LevelRecord]
    status: str
    params: Params
    mode: str
    relaxed: bool

    @property
    def iterations(self) -> int:
        return len(self.levels)

    @property
    def fingerprint_key(self) -> tuple:
        return tuple((tuple(sorted(lv.T)), tuple(sorted(lv.T_prime))) for lv in self.levels)

    def fingerprint_bound_failures(self) -> list[str]:
        """Per-level fingerprint size bounds, in exact arithmetic.

        Per host: |T_i| <= 2s M_i / t and |T'_i| <= M_i / z. Against the
        original host M, with levels counted from 0:
        |T_i| <= 2s M gamma^i / t and |T'_i| <= M gamma^i / z.
        """
        p = self.params
        m0 = self.levels[0].host_size if self.levels else 0
        gamma = 1 - p.eps / 2
        out = []
        for i, lv in enumerate(self.levels):
            if len(lv.T) * p.t > 2 * p.s * lv.host_size:
                out.append(f"level {i}: |T| > 2s M_i / t")
            if len(lv.T_prime) * p.z > lv.host_size:
                out.append(f"level {i}: |T'| > M_i / z")
            if len(lv.T) * p.t > 2 * p.s * m0 * gamma**i:
                out.append(f"level {i}: |T| > 2s M gamma^i / t")
            if len(lv.T_prime) * p.z > m0 * gamma**i:
                out.append(f"level {i}: |T'| > M gamma^i / z")
        return out

    def to_dict(self) -> dict:
        return {
            "container": sorted(self.container),
            "status": self.status,
            "iterations": self.iterations,
            "mode": self.mode,
            "relaxed": self.relaxed,
            "params": self.params.to_dict(),
            "levels": [lv.to_dict() for lv in self.levels],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_dict(cls, d: dict) -> ContainerRecord:
        levels = [
            LevelRecord(
                lv["host_size"],
                frozenset(lv["T"]),
                frozenset(lv["T_prime"]),
                lv["container_size"],
                lv["certified"],
                lv["stop_phase"],
                tuple(lv.get("invariant_failures", ())),
            )
            for lv in d["levels"]
        ]
        return cls(frozenset(d["container"]), levels, d["status"], Params.from_dict(d["params"]), d["mode"], d["relaxed"])

    @classmethod
    def from_json(cls, text: str) -> ContainerRecord:
        return cls.from_dict(json.loads(text))


def iterate_containers(
    hg: RootedHypergraph,
    independent: Iterable[int],
    params: Params,
    mode: str = "exact",
    relaxed: bool = False,
) -> ContainerRecord:
    """Apply the container algorithm to H, H[C_1], H[C_2], ... until the host is small.

    Stops with status ``small`` once the host has at most (1+100 eps) N
    vertices, or ``hypothesis-failed`` when a level keeps more than
    (1 - eps/2) of its host (the per-level guarantee did not materialise).
    """
    I = frozenset(independent)
    target = (1 + 100 * params.eps) * params.N
    gamma = 1 - params.eps / 2
    host = hg
    container = frozenset(hg.vertices)
    levels: list[LevelRecord] = []
    status = "small"
    while host.num_vertices > target:
        run = run_container(host, I, params, mode=mode, relaxed=relaxed)
        levels.append(
            LevelRecord(
                host.num_vertices,
                run.T,
                run.T_prime,
                len(run.C),
                run.certification["certified"],
                run.stop_phase,
                tuple(run.invariant_failures),
            )
        )
        container = run.C
        if len(run.C) > gamma * host.num_vertices:
            status = "hypothesis-failed"
            break
        host = induced(host, run.C)
    return ContainerRecord(container, levels, status, params, mode, relaxed)


def reconstruct_record(
    hg: RootedHypergraph,
    fingerprints: Iterable[tuple[Iterable[int], Iterable[int]]],
    params: Params,
    mode: str = "exact",
) -> frozenset[int]:
    """Container of an iterated run from its per-level fingerprints alone."""
    host = hg
    container = frozenset(hg.vertices)
    for T, S in fingerprints:
        container = reconstruct(host, T, S, params, mode)
        host = induced(host, container)
    return container


@dataclass
class ContainerFamily:
    containers: list[frozenset[int]]
    assignment: dict[frozenset[int], frozenset[int]]
    fingerprints: dict[frozenset[int], tuple] = field(default_factory=dict)

    @property
    def distinct_fingerprints(self) -> int:
        return len(set(self.fingerprints.values()))

    def export(self) -> list[list[int]]:
        return [sorted(c) for c in self.containers]


def collect_container_family(
    hg: RootedHypergraph,
    independent_sets: Iterable[Iterable[int]],
    params: Params,
    mode: str = "exact",
    relaxed: bool = False,
) -> ContainerFamily:
    """Containers for every supplied independent set, deduplicated and sorted."""
    assignment: dict[frozenset[int], frozenset[int]] = {}
    prints: dict[frozenset[int], tuple] = {}
    for raw in independent_sets:
        I = frozenset(raw)
        if I in assignment:
            continue
        if not is_independent(hg, I):
            raise NotIndependentError(f"not independent: {sorted(I)}")
        record = iterate_containers(hg, I, params, mode, relaxed)
        assignment[I] = record.container
        prints[I] = record.fingerprint_key
    containers = sorted(set(assignment.values()), key=lambda c: (len(c), sorted(c)))
    return ContainerFamily(containers, assignment, prints)


def generate_synthetic_rooted(m: int, edge_density: float, seed: int = 0) -> RootedHypergraph:
    """Random 1-rooted hypergraph on ``range(m)``.

    Every edge owns a distinct non-head pair, which makes the result 1-rooted
    by construction. ``edge_density`` is the fraction of the C(m, 2) pairs
    used; each chosen pair gets a uniformly random head outside it.
    """
    if not 0 <= edge_density <= 1:
        raise ValueError("edge_density must lie in [0, 1] (at most one edge per non-head pair)")
    pairs = list(combinations(range(m), 2))
    count = round(edge_density * len(pairs))
    if count and m < 3:
        raise ValueError("need at least 3 vertices for an edge")
    rng = random.Random(seed)
    rng.shuffle(pairs)
    edges = []
    for a, b in pairs[:count]:
        h = rng.randrange(m - 2)
        for x in sorted((a, b)):
            if h >= x:
                h += 1
        edges.append((a, b, h, h))
    return build_hypergraph(m, edges, 1)


def random_independent_set(hg: RootedHypergraph, rng: random.Random, keep_prob: float = 0.5) -> frozenset[int]:
    """Greedy random independent set: visit vertices in random order, add when safe."""
    order = list(hg.vertices)
    rng.shuffle(order)
    chosen: set[int] = set()
    incident: dict[int, list[tuple[int, int]]] = {}
    for u, v, w, _h in hg.edge_array.tolist():
        incident.setdefault(u, []).append((v, w))
        incident.setdefault(v, []).append((u, w))
        incident.setdefault(w, []).append((u, v))
    for x in order:
        if rng.random() >= keep_prob:
            continue
        if any(a in chosen and b in chosen for a, b in incident.get(x, ())):
            continue
        chosen.add(x)
    return frozenset(chosen)


__all__ = [
    "BoundReport",
    "ContainerFamily",
    "ContainerRecord",
    "EntropyCheck",
    "LevelRecord",
    "binary_entropy",
    "check_entropy_bound",
    "collect_container_family",
    "container_count_bound",
    "generate_synthetic_rooted",
    "iterate_containers",
    "levels_needed",
    "random_independent_set",
    "reconstruct_record",
    "sum_binomials",
]
