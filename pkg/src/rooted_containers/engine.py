"""Two-phase container algorithm for rooted 3-uniform hypergraphs.

Phase I repeatedly picks, among the eligible vertices of ``A \\ S``, the one
whose head link graph inside ``A \\ S`` has the most edges (ties: smallest
id). Vertices outside the independent set are discarded; vertices inside it
go into the fingerprint ``T`` and contribute a bounded-degree witness graph
to the link multigraph ``L``. Phase II peels high-degree vertices off ``L``
and records the ones in the independent set in ``T'``.

The container depends only on ``(T, T')``: :func:`reconstruct` replays the
same code path with membership answered from the fingerprints.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from collections.abc import Callable, Iterable
from dataclasses import dataclass, field
from fractions import Fraction

import networkx as nx
import numpy as np

from .hypergraph import Graph, RootedHypergraph, is_independent, membership_mask, verify_rooted

MODES = ("exact", "greedy")
DEGREE_RULE = "head-link-edges"


class ParameterError(ValueError):
    pass


class NotIndependentError(ValueError):
    pass


def as_fraction(x: int | float | str | Fraction) -> Fraction:
    """Exact rational view of ``x``; floats go through their shortest repr (0.1 -> 1/10)."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a parameter value")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ParameterError(f"non-finite parameter {x}")
        return Fraction(repr(x))
    return Fraction(x)


@dataclass(frozen=True)
class Params:
    """Container parameters. ``tau`` defaults to 2s/t and ``z`` to 4*eps*s."""

    eps: Fraction
    s: Fraction
    t: Fraction
    N: Fraction
    M: int | None = None
    tau: Fraction | None = None
    z: Fraction | None = None
    r: int = 1

    def __post_init__(self) -> None:
        for name in ("eps", "s", "t", "N"):
            value = as_fraction(getattr(self, name))
            if value <= 0:
                raise ParameterError(f"{name} must be positive, got {value}")
            object.__setattr__(self, name, value)
        tau = 2 * self.s / self.t if self.tau is None else as_fraction(self.tau)
        z = 4 * self.eps * self.s if self.z is None else as_fraction(self.z)
        if tau <= 0 or z <= 0:
            raise ParameterError("tau and z must be positive")
        object.__setattr__(self, "tau", tau)
        object.__setattr__(self, "z", z)
        if self.M is not None and self.M <= 0:
            raise ParameterError("M must be a positive integer")
        if self.r < 1:
            raise ParameterError("r must be a positive integer")

    @property
    def beta(self) -> Fraction:
        return self.r / (4 * self.eps * self.s)

    def with_host(self, m: int) -> Params:
        return Params(self.eps, self.s, self.t, self.N, m, self.tau, self.z, self.r)

    def to_dict(self) -> dict:
        return {
            "eps": str(self.eps),
            "s": str(self.s),
            "t": str(self.t),
            "N": str(self.N),
            "M": self.M,
            "tau": str(self.tau),
            "z": str(self.z),
            "r": self.r,
        }

    @classmethod
    def from_dict(cls, d: dict) -> Params:
        return cls(
            Fraction(d["eps"]),
            Fraction(d["s"]),
            Fraction(d["t"]),
            Fraction(d["N"]),
            d.get("M"),
            None if d.get("tau") is None else Fraction(d["tau"]),
            None if d.get("z") is None else Fraction(d["z"]),
            d.get("r", 1),
        )


def validate_params(params: Params, profile: str = "theorem") -> list[str]:
    """Names of the violated inequalities of ``profile``; empty means pass.

    Profiles: ``theorem`` (container theorem hypotheses), ``algorithm``
    (container algorithm input), ``r-rooted`` (r-rooted container theorem).
    Constraints involving ``M`` are skipped when ``M`` is unset.
    """
    p = params
    checks: list[tuple[str, bool]]
    if profile == "theorem":
        checks = [
            ("eps <= 1/10", p.eps <= Fraction(1, 10)),
            ("8s <= eps*t", 8 * p.s <= p.eps * p.t),
            ("1/eps^2 <= s", 1 / p.eps**2 <= p.s),
        ]
    elif profile == "algorithm":
        checks = [
            ("tau >= 2s/t", p.tau >= 2 * p.s / p.t),
            ("eps <= 1/10", p.eps <= Fraction(1, 10)),
            ("4*eps*s >= z", 4 * p.eps * p.s >= p.z),
            ("tau + 1/z <= eps/2", p.tau + 1 / p.z <= p.eps / 2),
        ]
    elif profile == "r-rooted":
        checks = [
            ("eps <= 1/10", p.eps <= Fraction(1, 10)),
            ("4s/t + r/(2*eps*s) <= eps", 4 * p.s / p.t + p.r / (2 * p.eps * p.s) <= p.eps),
        ]
    else:
        raise ValueError(f"unknown profile {profile!r}")
    if profile != "algorithm" and p.M is not None:
        checks.append(("M >= (1+100*eps)*N", p.M >= (1 + 100 * p.eps) * p.N))
    return [name for name, ok in checks if not ok]


def certify_derivation(params: Params) -> dict[str, bool]:
    """Check that theorem-profile params yield an algorithm-profile run with tau=2s/t, z=4*eps*s."""
    derived = Params(params.eps, params.s, params.t, params.N, params.M)
    theorem_ok = not validate_params(params, "theorem")
    algorithm_ok = not validate_params(derived, "algorithm")
    return {
        "theorem_profile": theorem_ok,
        "derived_algorithm_profile": algorithm_ok,
        "implication_holds": (not theorem_ok) or algorithm_ok,
    }


def _capacity(s: Fraction | int | float) -> int:
    return math.floor(as_fraction(s))


def greedy_bounded_subgraph(g: Graph, s) -> Graph:
    """Scan edges in lexicographic order, keeping one when both ends have room."""
    cap = _capacity(s)
    if g.max_degree() <= cap:
        return g
    kept: list[tuple[int, int]] = []
    load: Counter[int] = Counter()
    for a, b, mult in g.edges_with_multiplicity():
        for _ in range(mult):
            if load[a] < cap and load[b] < cap:
                kept.append((a, b))
                load[a] += 1
                load[b] += 1
    return Graph(g.vertices, kept)


def max_bounded_subgraph(g: Graph, s) -> Graph:
    """A maximum subgraph with all degrees at most ``s``.

    Reduces the degree-constrained subgraph problem to maximum matching: each
    vertex gets ``floor(s)`` copies, each edge ``ab`` becomes a path
    ``a-copy -- e_a -- e_b -- b-copy`` with the middle edge internal. A
    maximum matching has size ``e(G) + opt``; gadgets matched at both outer
    ends are the chosen edges.
    """
    cap = _capacity(s)
    edges = [(a, b) for a, b, mult in g.edges_with_multiplicity() for _ in range(mult)]
    if cap <= 0 or not edges:
        return Graph(g.vertices)
    if g.max_degree() <= cap:
        return g
    gadget = nx.Graph()
    for j, (a, b) in enumerate(edges):
        ea, eb = ("e", j, 0), ("e", j, 1)
        gadget.add_edge(ea, eb)
        for i in range(cap):
            gadget.add_edge(("v", a, i), ea)
            gadget.add_edge(("v", b, i), eb)
    matching = nx.max_weight_matching(gadget, maxcardinality=True)
    partner = {}
    for x, y in matching:
        partner[x] = y
        partner[y] = x
    chosen = []
    for j, edge in enumerate(edges):
        pa, pb = partner.get(("e", j, 0)), partner.get(("e", j, 1))
        if pa is not None and pb is not None and pa[0] == "v" and pb[0] == "v":
            chosen.append(edge)
    return Graph(g.vertices, chosen)


def max_bounded_subgraph_edges(g: Graph, s) -> int:
    return max_bounded_subgraph(g, s).num_edges


@dataclass(frozen=True)
class EligibilityWitness:
    vertex: int
    graph: Graph
    link_edges: int

    @property
    def edge_count(self) -> int:
        return self.graph.num_edges

    @property
    def max_degree(self) -> int:
        return self.graph.max_degree()


def _witness(link: Graph, s, t: Fraction, mode: str) -> Graph | None:
    if link.num_edges < t:
        return None
    greedy = greedy_bounded_subgraph(link, s)
    if greedy.num_edges >= t:
        return greedy
    if mode == "greedy":
        return None
    exact = max_bounded_subgraph(link, s)
    return exact if exact.num_edges >= t else None


def _check_mode(mode: str) -> None:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")


def eligibility_witness(
    hg: RootedHypergraph, available: Iterable[int], v: int, s, t, mode: str = "exact"
) -> EligibilityWitness | None:
    """Witness that ``v`` is (A, s, t)-eligible, or ``None``."""
    _check_mode(mode)
    avail = set(available)
    if v not in avail:
        raise ValueError(f"vertex {v} is not in the available set")
    avail.discard(v)
    pairs = [(a, b) for a, b in hg.head_pairs(v) if a in avail and b in avail]
    link = Graph(avail, pairs)
    found = _witness(link, s, as_fraction(t), mode)
    return None if found is None else EligibilityWitness(v, found, len(pairs))


def is_eligible(hg: RootedHypergraph, available: Iterable[int], v: int, s, t, mode: str = "exact") -> bool:
    return eligibility_witness(hg, available, v, s, t, mode) is not None


def _first_eligible(
    hg: RootedHypergraph, avail: set[int], s, t: Fraction, mode: str
) -> tuple[int, int, Graph] | None:
    """Eligible vertex of ``avail`` with the largest head-link edge count inside ``avail``."""
    if hg.num_edges == 0 or not avail:
        return None
    mask = membership_mask(hg, avail)
    heads, starts, by_head, first, second = hg.head_layout()
    rows = mask[by_head]
    rows &= mask[first]
    rows &= mask[second]
    counts = np.zeros(mask.shape[0], dtype=np.int64)
    counts[heads] = np.add.reduceat(rows.view(np.int8), starts, dtype=np.int64)
    floor_t = max(1, math.ceil(t))
    candidates = np.flatnonzero(counts >= floor_t)
    # stable sort on -count keeps ascending ids among ties
    for v in candidates[np.argsort(-counts[candidates], kind="stable")].tolist():
        link = [(a, b) for a, b in hg.head_pairs(v) if a in avail and b in avail]
        found = _witness(Graph((), link), s, t, mode)
        if found is not None:
            return v, len(link), found
    return None


def is_core(hg: RootedHypergraph, available: Iterable[int], s, t, mode: str = "exact") -> bool:
    _check_mode(mode)
    return _first_eligible(hg, set(available), s, as_fraction(t), mode) is None


@dataclass(frozen=True)
class TraceStep:
    phase: str
    v: int
    in_I: bool
    A_size: int
    L_edges: int
    degree: int

    def to_dict(self) -> dict:
        return {
            "phase": self.phase,
            "v": self.v,
            "in_I": self.in_I,
            "A_size": self.A_size,
            "L_edges": self.L_edges,
            "degree": self.degree,
        }


@dataclass
class ContainerRun:
    params: Params
    mode: str
    relaxed: bool
    host_size: int
    C: frozenset[int]
    T: frozenset[int]
    T_prime: frozenset[int]
    trace: list[TraceStep]
    stop_phase: str
    final_A_size: int
    certification: dict[str, bool] = field(default_factory=dict)
    invariant_failures: list[str] = field(default_factory=list)

    @property
    def fingerprints(self) -> tuple[frozenset[int], frozenset[int]]:
        return self.T, self.T_prime

    def to_dict(self) -> dict:
        return {
            "params": self.params.to_dict(),
            "mode": self.mode,
            "relaxed": self.relaxed,
            "degree_rule": DEGREE_RULE,
            "host_size": self.host_size,
            "T": sorted(self.T),
            "T_prime": sorted(self.T_prime),
            "C": sorted(self.C),
            "stop_phase": self.stop_phase,
            "final_A_size": self.final_A_size,
            "certification": dict(sorted(self.certification.items())),
            "invariant_failures": list(self.invariant_failures),
            "trace": [step.to_dict() for step in self.trace],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_dict(cls, d: dict) -> ContainerRun:
        return cls(
            params=Params.from_dict(d["params"]),
            mode=d["mode"],
            relaxed=d["relaxed"],
            host_size=d["host_size"],
            C=frozenset(d["C"]),
            T=frozenset(d["T"]),
            T_prime=frozenset(d["T_prime"]),
            trace=[TraceStep(**step) for step in d["trace"]],
            stop_phase=d["stop_phase"],
            final_A_size=d["final_A_size"],
            certification=dict(d.get("certification", {})),
            invariant_failures=list(d.get("invariant_failures", [])),
        )

    @classmethod
    def from_json(cls, text: str) -> ContainerRun:
        return cls.from_dict(json.loads(text))


class _LinkGraph:
    """Mutable multigraph L, adjacency with multiplicities."""

    def __init__(self) -> None:
        self.adj: dict[int, Counter[int]] = {}
        self.edges = 0

    def add(self, a: int, b: int) -> None:
        self.adj.setdefault(a, Counter())[b] += 1
        self.adj.setdefault(b, Counter())[a] += 1
        self.edges += 1

    def drop(self, v: int) -> None:
        nbrs = self.adj.pop(v, None)
        if not nbrs:
            return
        for u, c in nbrs.items():
            self.edges -= c
            row = self.adj[u]
            del row[v]
            if not row:
                del self.adj[u]

    def distinct_neighbors(self, v: int) -> int:
        return len(self.adj.get(v, ()))

    def degree(self, v: int) -> int:
        row = self.adj.get(v)
        return sum(row.values()) if row else 0

    def neighbors(self, v: int) -> set[int]:
        return set(self.adj.get(v, ()))

    def problems(self, available: set[int], s: Fraction) -> list[str]:
        out = []
        if any(c > 1 for row in self.adj.values() for c in row.values()):
            out.append("L not simple")
        if any(sum(row.values()) > 2 * s for row in self.adj.values()):
            out.append("max degree of L exceeds 2s")
        if not set(self.adj) <= available:
            out.append("V(L) not inside A")
        return out


Membership = Callable[[int, str], bool]


def _execute(hg: RootedHypergraph, params: Params, mode: str, member: Membership, check: bool):
    _check_mode(mode)
    eps, s, t, z = params.eps, params.s, params.t, params.z
    m = hg.num_vertices
    A = set(hg.vertices)
    L = _LinkGraph()
    T: set[int] = set()
    Tp: set[int] = set()
    trace: list[TraceStep] = []
    failures: list[str] = []
    niceness_observed = True

    def audit(step: int) -> None:
        if check:
            failures.extend(f"step {step}: {msg}" for msg in L.problems(A, s))

    stop_limit = (1 - eps) * m
    s_ceil = math.ceil(s)
    stop_phase = "I"
    while True:
        if len(A) <= stop_limit:
            break
        S = {u for u in L.adj if u in A and L.distinct_neighbors(u) >= s_ceil}
        avail = A - S
        choice = _first_eligible(hg, avail, s, t, mode)
        if choice is None:
            if len(avail) > (1 + eps) * params.N:
                niceness_observed = False
            stop_phase = "II"
            break
        v, deg, witness = choice
        inside = member(v, "I")
        A.discard(v)
        if inside:
            T.add(v)
            for a, b in witness.edge_list():
                L.add(a, b)
        L.drop(v)
        trace.append(TraceStep("I", v, inside, len(A), L.edges, deg))
        audit(len(trace))

    if stop_phase == "II":
        while A:
            v = min(A, key=lambda u: (-L.degree(u), u))
            deg = L.degree(v)
            if deg < z:
                break
            inside = member(v, "II")
            if inside:
                Tp.add(v)
                removed = L.neighbors(v) | {v}
            else:
                removed = {v}
            for u in removed:
                A.discard(u)
                L.drop(u)
            trace.append(TraceStep("II", v, inside, len(A), L.edges, deg))
            audit(len(trace))

    C = frozenset(A | T | Tp)
    return C, frozenset(T), frozenset(Tp), trace, stop_phase, len(A), niceness_observed, failures


def run_container(
    hg: RootedHypergraph,
    independent: Iterable[int],
    params: Params,
    mode: str = "exact",
    relaxed: bool = False,
    check_invariants: bool = True,
) -> ContainerRun:
    """Run both phases on ``hg`` for the independent set ``independent``.

    Strict mode requires the algorithm profile and a 1-rooted input.
    Unconditional invariants are recorded in ``invariant_failures``; the
    size guarantee is only claimed when ``certification["certified"]``.
    """
    I = frozenset(independent)
    if not I <= set(hg.vertices):
        raise ValueError("independent set has vertices outside the hypergraph")
    if not is_independent(hg, I):
        raise NotIndependentError("input set is not independent")
    if not relaxed:
        violated = validate_params(params, "algorithm")
        if violated:
            raise ParameterError("algorithm profile violated: " + ", ".join(violated))
        if not verify_rooted(hg, 1):
            raise ParameterError("strict mode needs a 1-rooted hypergraph")

    C, T, Tp, trace, stop_phase, final_a, nice, failures = _execute(
        hg, params, mode, lambda v, _phase: v in I, check_invariants
    )
    m = hg.num_vertices
    if check_invariants:
        if not I <= C:
            failures.append("I not inside C")
        if not (T <= I and Tp <= I):
            failures.append("fingerprint not inside I")
        if len(T) * params.t > 2 * params.s * m:
            failures.append("|T| exceeds 2sM/t")
        if len(Tp) * params.z > m:
            failures.append("|T'| exceeds M/z")

    eps = params.eps
    certification = {
        "algorithm_profile": not validate_params(params, "algorithm"),
        "host_large": m >= (1 + 100 * eps) * params.N,
        "niceness_observed": nice,
    }
    certification["certified"] = all(certification.values())
    certification["size_guarantee"] = final_a <= (1 - eps) * m and len(C) <= (1 - eps / 2) * m
    if check_invariants and certification["certified"] and not certification["size_guarantee"]:
        failures.append("certified run violates the container size guarantee")

    return ContainerRun(
        params=params.with_host(m),
        mode=mode,
        relaxed=relaxed,
        host_size=m,
        C=C,
        T=T,
        T_prime=Tp,
        trace=trace,
        stop_phase=stop_phase,
        final_A_size=final_a,
        certification=certification,
        invariant_failures=failures,
    )


def reconstruct(
    hg: RootedHypergraph,
    T: Iterable[int],
    T_prime: Iterable[int],
    params: Params,
    mode: str = "exact",
) -> frozenset[int]:
    """Container determined by the fingerprints alone."""
    T_set, Tp_set = frozenset(T), frozenset(T_prime)

    def member(v: int, phase: str) -> bool:
        return v in (T_set if phase == "I" else Tp_set)

    return _execute(hg, params, mode, member, check=False)[0]
