"""Union-free families on the subset lattice P(n).

A vertex id is the bitmask of the subset it stands for. The union hypergraph
has one edge per unordered triple of distinct sets {A, B, C} with
A | B == C, headed at C.
"""

from __future__ import annotations

import math
from collections.abc import Iterable
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import mpmath
import numpy as np

from .family import binary_entropy
from .hypergraph import RootedHypergraph, _from_canonical, count_independent_sets

MAX_UNION_N = 22
MAX_UNION_EDGES = 10_000_000
MAX_CENSUS_N = 4
EXACT_BINOMIAL_MAX_N = 1000


def union_edge_count(n: int) -> int:
    """Closed-form edge count: sum over |C| = k of (3^k - 1)/2 - (2^k - 1)."""
    return (4**n - 2**n) // 2 - 3**n + 2**n


def build_union_hypergraph(n: int) -> RootedHypergraph:
    if not 1 <= n <= MAX_UNION_N:
        raise ValueError(f"n must lie in [1, {MAX_UNION_N}], got {n}")
    if union_edge_count(n) > MAX_UNION_EDGES:
        raise ValueError(f"n={n} needs {union_edge_count(n)} edges; memory limit is {MAX_UNION_EDGES}")
    size = 1 << n
    ids = np.arange(size, dtype=np.int64)
    chunks = []
    for a in range(size):
        b = ids[a + 1 :]
        c = b | a
        keep = (c != a) & (c != b)
        if not keep.any():
            continue
        bb, cc = b[keep], c[keep]
        block = np.empty((bb.shape[0], 4), dtype=np.int64)
        block[:, 0] = a
        block[:, 1] = bb
        block[:, 2] = cc
        block[:, 3] = cc
        chunks.append(block)
    # c strictly contains a and b, so c > b > a and rows come out sorted
    edges = np.concatenate(chunks) if chunks else np.zeros((0, 4), dtype=np.int64)
    return _from_canonical(range(size), edges, 1)


def is_union_free(family: Iterable[int]) -> bool:
    """True iff no three distinct members satisfy A | B == C."""
    members = np.unique(np.fromiter(family, dtype=np.int64))
    if members.shape[0] < 3:
        return True
    present = np.zeros(int(members[-1]) + 1, dtype=bool)
    present[members] = True
    top = present.shape[0]
    for i in range(members.shape[0] - 1):
        a = members[i]
        rest = members[i + 1 :]
        c = rest | a
        hit = (c != a) & (c != rest) & (c < top)
        if hit.any() and present[c[hit]].any():
            return False
    return True


def middle_layer(n: int) -> frozenset[int]:
    if n < 1:
        raise ValueError("n must be positive")
    k = n // 2
    return frozenset(sum(1 << i for i in combo) for combo in combinations(range(n), k))


@lru_cache(maxsize=None)
def _pair_masks(n: int) -> tuple[tuple[int, tuple[int, ...]], ...]:
    """For each set C: family-bitmasks of the pairs {A, B} of other sets with A | B == C."""
    size = 1 << n
    out = []
    for c in range(size):
        subs = [x for x in range(size) if x & c == x and x != c]
        masks = tuple((1 << a) | (1 << b) for a, b in combinations(subs, 2) if a | b == c)
        if masks:
            out.append((c, masks))
    return tuple(out)


def _count_chunk(args: tuple[int, int, int]) -> int:
    n, lo, hi = args
    rules = _pair_masks(n)
    count = 0
    for fam in range(lo, hi):
        for c, masks in rules:
            if fam >> c & 1 and any(fam & pm == pm for pm in masks):
                break
        else:
            count += 1
    return count


def count_union_free(n: int, threads: int = 1) -> int:
    """alpha(n) by checking every family F of P(n) directly against the definition.

    Families are encoded as 2^n-bit integers; the family space is split into
    contiguous chunks whose counts are summed, so the result does not depend
    on ``threads``.
    """
    if not 0 <= n <= MAX_CENSUS_N:
        raise ValueError(f"exhaustive census supports n <= {MAX_CENSUS_N}")
    total = 1 << (1 << n)
    chunks = max(1, threads) * 4
    bounds = [total * i // chunks for i in range(chunks + 1)]
    jobs = [(n, bounds[i], bounds[i + 1]) for i in range(chunks)]
    if threads <= 1:
        return sum(map(_count_chunk, jobs))
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return sum(pool.map(_count_chunk, jobs))


def count_union_free_via_hypergraph(n: int) -> int:
    """alpha(n) as the number of independent sets of the union hypergraph."""
    if not 1 <= n <= MAX_CENSUS_N:
        raise ValueError(f"exhaustive census supports 1 <= n <= {MAX_CENSUS_N}")
    return count_independent_sets(build_union_hypergraph(n))


def central_binomial(n: int) -> int:
    return math.comb(n, n // 2)


def log2_central_binomial_excess(n: int) -> float:
    """log2 C(n, floor(n/2)) - n, stable for astronomically large n."""
    if n <= 4096:
        return math.log2(central_binomial(n)) - n
    with mpmath.workdps(len(str(n)) + 40):
        k = n // 2
        lg = mpmath.loggamma(n + 1) - mpmath.loggamma(k + 1) - mpmath.loggamma(n - k + 1)
        return float(lg / mpmath.log(2) - n)


SUPERSAT_CONSTANT_LOG10 = 40
COUNT_CONSTANT_LOG10 = 44


def _count_gap_log2(n: int, eps: float) -> float:
    """log2(10^44 eps^-3 (2^n/n) log2 n) - log2(eps C(n, n/2)); the 2^n cancels."""
    return (
        COUNT_CONSTANT_LOG10 * math.log2(10)
        - 4 * math.log2(eps)
        - math.log2(n)
        + math.log2(math.log2(n))
        - log2_central_binomial_excess(n)
    )


def _theorem_terms(n: int, eps: float) -> tuple[float, float]:
    tau = 2 * 10.0**SUPERSAT_CONSTANT_LOG10 / (eps**2 * n)
    beta = 1 / (4 * eps * n)
    return tau, beta


def _theorem_gap_log2(n: int, eps: float) -> float | None:
    """log2((2 * 2^n / eps)(H(tau) + H(beta))) - log2(eps C(n, n/2)), or None if tau or beta > 1/2."""
    tau, beta = _theorem_terms(n, eps)
    if tau > 0.5 or beta > 0.5:
        return None
    h = binary_entropy(tau) + binary_entropy(beta)
    return 1 - math.log2(eps) + math.log2(h) - math.log2(eps) - log2_central_binomial_excess(n)


@dataclass(frozen=True)
class AlphaReport:
    n: int
    eps: float
    alpha: int | None
    lower_exponent: int | None
    lower_exponent_log2: float
    count_term_log2: float
    theorem_count_log2: float | None
    eps_size_log2: float
    size_term: float | None
    upper_exponent: float | None
    count_term_fits: bool
    theorem_fits: bool | None

    @property
    def holds(self) -> bool:
        """Whether every link of the upper-bound chain holds numerically at this n."""
        return bool(self.count_term_fits and self.theorem_fits)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "eps": self.eps,
            "alpha": self.alpha,
            "lower_exponent": self.lower_exponent,
            "lower_exponent_log2": self.lower_exponent_log2,
            "count_term_log2": self.count_term_log2,
            "theorem_count_log2": self.theorem_count_log2,
            "eps_size_log2": self.eps_size_log2,
            "size_term": self.size_term,
            "upper_exponent": self.upper_exponent,
            "count_term_fits": self.count_term_fits,
            "theorem_fits": self.theorem_fits,
            "holds": self.holds,
        }


def _check_eps(eps: float) -> None:
    if not 0 < eps < 1 / 200:
        raise ValueError("eps must satisfy 0 < eps < 1/200")


def alpha_bounds(n: int, eps: float, exact: bool = True) -> AlphaReport:
    """Evaluate both sides of alpha(n) bounds at a concrete n.

    All sizes are reported as log2 values since they are of order 2^n.
    ``count_term_fits``: 10^44 eps^-3 (2^n/n) log2 n <= eps C(n, n/2).
    ``theorem_fits``: the container-count bound with s = n,
    t = eps^2 n^2 / 10^40 is <= eps C(n, n/2); ``None`` where the entropy
    bound is inapplicable (tau or beta above 1/2).
    Past n = EXACT_BINOMIAL_MAX_N only the log2 fields are filled in.
    """
    _check_eps(eps)
    if n < 2:
        raise ValueError("n must be at least 2")
    excess = log2_central_binomial_excess(n)
    lower_log2 = n + excess
    central = central_binomial(n) if n <= EXACT_BINOMIAL_MAX_N else None
    eps_size_log2 = math.log2(eps) + lower_log2
    count_log2 = eps_size_log2 + _count_gap_log2(n, eps)
    theorem_gap = _theorem_gap_log2(n, eps)
    theorem_log2 = None if theorem_gap is None else eps_size_log2 + theorem_gap
    alpha = count_union_free(n) if exact and n <= MAX_CENSUS_N else None
    return AlphaReport(
        n=n,
        eps=eps,
        alpha=alpha,
        lower_exponent=central,
        lower_exponent_log2=lower_log2,
        count_term_log2=count_log2,
        theorem_count_log2=theorem_log2,
        eps_size_log2=eps_size_log2,
        size_term=None if central is None else (1 + 100 * eps) * central,
        upper_exponent=None if central is None else (1 + 101 * eps) * central,
        count_term_fits=_count_gap_log2(n, eps) <= 0,
        theorem_fits=None if theorem_gap is None else theorem_gap <= 0,
    )


def crossover_n(eps: float, which: str = "count") -> int:
    """Smallest n (found by doubling then bisection) from which the chosen comparison holds.

    ``count``: 10^44 eps^-3 (2^n/n) log2 n <= eps C(n, n/2).
    ``theorem``: (2 * 2^n / eps)(H(tau) + H(beta)) <= eps C(n, n/2).
    Both gaps decrease in n once n is past a handful of small values.
    """
    _check_eps(eps)
    if which == "count":
        def fits(n: int) -> bool:
            return _count_gap_log2(n, eps) <= 0
    elif which == "theorem":
        def fits(n: int) -> bool:
            gap = _theorem_gap_log2(n, eps)
            return gap is not None and gap <= 0
    else:
        raise ValueError("which must be 'count' or 'theorem'")
    lo, hi = 2, 4
    while not fits(hi):
        lo, hi = hi, hi * 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if fits(mid):
            hi = mid
        else:
            lo = mid
    return hi if not fits(lo) else lo
