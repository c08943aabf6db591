import math
import random
from itertools import combinations

import numpy as np
import pytest

from rooted_containers import (
    alpha_bounds,
    build_union_hypergraph,
    count_union_free,
    is_independent,
    is_union_free,
    middle_layer,
)
from rooted_containers.unionfree import (
    count_union_free_via_hypergraph,
    crossover_n,
    log2_central_binomial_excess,
    union_edge_count,
)


def brute_union_triples(n):
    """Unordered triples of distinct sets {A, B, C} in P(n) with A | B == C."""
    found = set()
    for a, b in combinations(range(1 << n), 2):
        c = a | b
        if c not in (a, b):
            found.add((a, b, c))
    return found


def brute_union_free(family):
    fam = set(family)
    return not any(a | b in fam and a | b not in (a, b) for a, b in combinations(fam, 2))


def test_union_hypergraph_small_cases():
    assert build_union_hypergraph(1).num_edges == 0
    assert build_union_hypergraph(2).edges == [(1, 2, 3, 3)]


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_union_hypergraph_matches_pair_scan(n):
    hg = build_union_hypergraph(n)
    assert {(a, b, c) for a, b, c, _ in hg.edges} == brute_union_triples(n)
    assert all(h == c for _, _, c, h in hg.edges)
    assert hg.num_edges == union_edge_count(n)


def test_union_hypergraph_rejects_bad_n():
    with pytest.raises(ValueError):
        build_union_hypergraph(0)
    with pytest.raises(ValueError):
        build_union_hypergraph(23)
    with pytest.raises(ValueError, match="memory limit"):
        build_union_hypergraph(13)


def test_is_union_free_examples():
    assert not is_union_free([0b01, 0b10, 0b11])
    assert is_union_free(m for m in range(16) if m.bit_count() == 2)
    assert is_union_free([0, 0b1])
    assert is_union_free([])


@pytest.mark.parametrize("n", [1, 2, 3])
def test_is_union_free_matches_independence_exhaustive(n):
    hg = build_union_hypergraph(n)
    for fam_mask in range(1 << (1 << n)):
        fam = [x for x in range(1 << n) if fam_mask >> x & 1]
        expected = is_independent(hg, fam)
        assert is_union_free(fam) == expected == brute_union_free(fam)


def test_is_union_free_matches_independence_exhaustive_n4():
    hg = build_union_hypergraph(4)
    size = 16
    masks = np.arange(1 << size, dtype=np.int64)
    edges = np.asarray(hg.edges, dtype=np.int64)
    edge_masks = (1 << edges[:, 0]) | (1 << edges[:, 1]) | (1 << edges[:, 2])
    dependent = np.zeros(masks.shape[0], dtype=bool)
    for em in edge_masks:
        dependent |= (masks & em) == em
    rng = random.Random(0)
    for fam_mask in rng.sample(range(1 << size), 4000):
        fam = [x for x in range(size) if fam_mask >> x & 1]
        assert is_union_free(fam) == (not dependent[fam_mask])
    assert int((~dependent).sum()) == 5404


@pytest.mark.parametrize("n, count", [(5, 3000), (6, 2000), (8, 400), (10, 60), (12, 12)])
def test_is_union_free_matches_independence_random(n, count):
    hg = build_union_hypergraph(n)
    rng = random.Random(n)
    size = 1 << n
    for _ in range(count):
        # sparse families are the interesting ones; dense ones are never union-free
        k = rng.randint(0, min(size, 3 * n))
        fam = rng.sample(range(size), k)
        assert is_union_free(fam) == is_independent(hg, fam)


def test_union_free_is_monotone():
    rng = random.Random(4)
    for n in (4, 5, 6):
        base = sorted(middle_layer(n))
        extra = rng.sample(range(1 << n), 3)
        for fam in (base, base + extra):
            if not is_union_free(fam):
                continue
            for _ in range(30):
                sub = [x for x in fam if rng.random() < 0.6]
                assert is_union_free(sub)


def test_middle_layer():
    assert middle_layer(2) == {0b01, 0b10}
    assert len(middle_layer(4)) == 6 and is_union_free(middle_layer(4))
    assert len(middle_layer(5)) == math.comb(5, 2)
    for n in range(1, 9):
        assert is_union_free(middle_layer(n))


def test_census_values_and_dual_oracle():
    assert count_union_free(1) == 4
    assert count_union_free(2) == 14
    for n in (1, 2, 3):
        assert count_union_free(n) == count_union_free_via_hypergraph(n)
        assert count_union_free(n) >= 2 ** math.comb(n, n // 2)


def test_census_independent_of_threads():
    assert count_union_free(3, threads=1) == count_union_free(3, threads=3) == 124


def test_census_rejects_large_n():
    with pytest.raises(ValueError):
        count_union_free(5)


def test_central_binomial_excess_large_n_consistent():
    for n in (4000, 4096):
        exact = math.log2(math.comb(n, n // 2)) - n
        assert log2_central_binomial_excess(n) == pytest.approx(exact, abs=1e-9)
    # past the exact cutoff the mpmath branch takes over; compare against Stirling
    n = 10**6
    stirling = -0.5 * math.log2(math.pi * n / 2)
    assert log2_central_binomial_excess(n) == pytest.approx(stirling, abs=1e-6)


def test_alpha_bounds_small_n():
    report = alpha_bounds(2, 0.004)
    assert report.lower_exponent == 2
    assert report.alpha == 14 and 2**report.lower_exponent <= 14
    assert not report.holds
    assert report.size_term == pytest.approx(1.4 * 2)
    assert report.upper_exponent == pytest.approx(1.404 * 2)
    for n in range(2, 30):
        assert alpha_bounds(n, 0.004).lower_exponent == math.comb(n, n // 2)


def test_alpha_bounds_rejects_eps():
    with pytest.raises(ValueError, match="1/200"):
        alpha_bounds(10, 0.01)
    with pytest.raises(ValueError):
        alpha_bounds(10, 0)


def test_crossover_is_the_first_fitting_n():
    eps = 0.004
    n_star = crossover_n(eps, "count")
    assert alpha_bounds(n_star, eps, exact=False).count_term_fits
    assert not alpha_bounds(n_star - 1, eps, exact=False).count_term_fits
    assert n_star > 10**100
    t_star = crossover_n(eps, "theorem")
    assert alpha_bounds(t_star, eps, exact=False).theorem_fits
    assert not alpha_bounds(t_star - 1, eps, exact=False).theorem_fits
    assert alpha_bounds(max(n_star, t_star), eps, exact=False).holds
