import random
from fractions import Fraction
from itertools import combinations

import pytest

from rooted_containers import (
    ContainerRun,
    Graph,
    NotIndependentError,
    ParameterError,
    Params,
    build_hypergraph,
    certify_derivation,
    eligibility_witness,
    generate_synthetic_rooted,
    greedy_bounded_subgraph,
    is_core,
    is_eligible,
    max_bounded_subgraph,
    max_bounded_subgraph_edges,
    reconstruct,
    run_container,
    validate_params,
)
from rooted_containers.family import random_independent_set

TRIANGLE = Graph(range(3), [(0, 1), (1, 2), (0, 2)])
C4 = Graph(range(4), [(0, 1), (1, 2), (2, 3), (0, 3)])


def brute_max_bounded(g: Graph, s: int) -> int:
    edges = [(a, b) for a, b, c in g.edges_with_multiplicity() for _ in range(c)]
    best = 0
    for r in range(len(edges), 0, -1):
        for subset in combinations(edges, r):
            deg = {}
            for a, b in subset:
                deg[a] = deg.get(a, 0) + 1
                deg[b] = deg.get(b, 0) + 1
            if max(deg.values()) <= s:
                return r
    return best


def test_greedy_triangle():
    assert greedy_bounded_subgraph(TRIANGLE, 1).edge_list() == [(0, 1)]


def test_greedy_c4_traced():
    # scan (0,1) keep, (0,3) blocked, (1,2) blocked, (2,3) keep
    assert greedy_bounded_subgraph(C4, 1).edge_list() == [(0, 1), (2, 3)]


def test_greedy_large_s_is_identity():
    assert greedy_bounded_subgraph(C4, 2).edge_list() == C4.edge_list()


@pytest.mark.parametrize("g, s, expected", [(TRIANGLE, 1, 1), (C4, 1, 2), (C4, 2, 4), (TRIANGLE, 5, 3)])
def test_max_bounded_examples(g, s, expected):
    assert brute_max_bounded(g, s) == expected
    assert max_bounded_subgraph_edges(g, s) == expected


def test_max_bounded_beats_greedy():
    # greedy keeps (0,1) first and then blocks both (0,2) and (1,3)
    g = Graph(range(4), [(0, 1), (0, 2), (1, 3)])
    assert greedy_bounded_subgraph(g, 1).num_edges == 1
    assert brute_max_bounded(g, 1) == 2
    assert max_bounded_subgraph_edges(g, 1) == 2


def test_max_bounded_witness_is_valid():
    rng = random.Random(7)
    for _ in range(40):
        n = rng.randint(3, 8)
        edges = [e for e in combinations(range(n), 2) if rng.random() < 0.5]
        g = Graph(range(n), edges)
        s = rng.randint(1, 3)
        sub = max_bounded_subgraph(g, s)
        assert sub.max_degree() <= s
        assert set(sub.edge_list()) <= set(g.edge_list())
        assert sub.num_edges == brute_max_bounded(g, s)


def test_fractional_s_uses_floor():
    assert max_bounded_subgraph_edges(C4, Fraction(3, 2)) == 2
    assert greedy_bounded_subgraph(C4, 1.9).num_edges == 2


def c4_link_hypergraph():
    # vertex 4 heads four edges whose link pairs form the cycle 0-1-2-3-0
    return build_hypergraph(5, [(0, 1, 4, 4), (1, 2, 4, 4), (2, 3, 4, 4), (0, 3, 4, 4)])


def test_eligibility_examples():
    edgeless = build_hypergraph(5, [])
    assert not is_eligible(edgeless, range(5), 2, 1, 1)
    hg = c4_link_hypergraph()
    witness = eligibility_witness(hg, range(5), 4, 1, 2, mode="exact")
    assert witness is not None
    assert witness.edge_count == 2 and witness.max_degree == 1
    assert witness.graph.edge_list() == [(0, 1), (2, 3)]
    assert not is_eligible(hg, range(5), 4, 1, 3, mode="exact")


def test_greedy_eligibility_implies_exact():
    rng = random.Random(11)
    for seed in range(30):
        hg = generate_synthetic_rooted(14, 0.7, seed)
        avail = [v for v in hg.vertices if rng.random() < 0.8]
        for v in avail:
            for s, t in ((1, 2), (2, 3), (2, 5)):
                if is_eligible(hg, avail, v, s, t, "greedy"):
                    assert is_eligible(hg, avail, v, s, t, "exact")


def test_eligibility_requires_member():
    with pytest.raises(ValueError):
        eligibility_witness(c4_link_hypergraph(), [0, 1], 4, 1, 1)


def test_core_examples(union_hg):
    assert is_core(union_hg(3), [], 1, 1)
    assert is_core(build_hypergraph(6, []), range(6), 1, 1)
    assert not is_core(union_hg(2), range(4), 1, 1)


def test_validate_params_examples():
    ok = Params(0.1, 100, 8000, 1)
    assert validate_params(ok, "theorem") == []
    assert "eps <= 1/10" in validate_params(Params(0.2, 100, 8000, 1), "theorem")
    assert validate_params(Params(0.1, 100, 7000, 1), "theorem") == ["8s <= eps*t"]
    assert validate_params(ok, "algorithm") == []
    assert ok.tau == Fraction(1, 40) and ok.z == 40


def test_validate_params_host_size():
    p = Params(0.1, 100, 8000, 10, M=109)
    assert validate_params(p, "theorem") == ["M >= (1+100*eps)*N"]
    assert validate_params(Params(0.1, 100, 8000, 10, M=110), "theorem") == []


def test_derivation_certified_on_grid():
    for eps in (Fraction(1, 10), Fraction(1, 20), Fraction(1, 100)):
        for s in (1 / eps**2, 2 / eps**2, 5 / eps**2):
            for factor in (8, 9, 20):
                p = Params(eps, s, factor * s / eps, 1)
                report = certify_derivation(p)
                assert report["theorem_profile"] == (factor >= 8)
                assert report["implication_holds"]
                assert report["derived_algorithm_profile"]


def test_r_rooted_profile():
    p = Params(0.1, 200, 16000, 1, r=2)
    assert validate_params(p, "r-rooted") == []
    assert validate_params(Params(0.1, 200, 16000, 1, r=20), "r-rooted")


def test_float_params_are_exact():
    p = Params(0.1, 1.5, 3, 2)
    assert p.eps == Fraction(1, 10)
    assert p.s == Fraction(3, 2)


def test_run_edgeless():
    hg = build_hypergraph(10, [])
    p = Params(0.1, 1, 1, 1)
    for independent in (set(), {1, 4, 7}, set(range(10))):
        run = run_container(hg, independent, p, relaxed=True)
        assert run.C == frozenset(range(10))
        assert run.T == run.T_prime == frozenset()
        assert run.stop_phase == "II"
        assert not run.invariant_failures
        assert reconstruct(hg, (), (), p) == frozenset(range(10))


def test_run_empty_independent_set_only_deletes():
    hg = generate_synthetic_rooted(30, 0.5, seed=2)
    p = Params(0.5, 2, 3, 1)
    run = run_container(hg, (), p, relaxed=True)
    assert run.T == run.T_prime == frozenset()
    assert all(not step.in_I for step in run.trace)
    deleted = {step.v for step in run.trace}
    assert run.C == frozenset(hg.vertices) - deleted
    assert run_container(hg, (), p, relaxed=True).C == run.C


def test_run_union_p2_traced(union_hg):
    hg = union_hg(2)
    p = Params(0.1, 1, 1, 1)
    run = run_container(hg, {0b01, 0b10}, p, relaxed=True)
    assert [(s.phase, s.v, s.in_I) for s in run.trace] == [("I", 0b11, False)]
    assert run.C == frozenset({0, 1, 2})
    assert {0b01, 0b10} <= run.C
    assert reconstruct(hg, run.T, run.T_prime, p) == run.C


def test_run_rejects_dependent_set(union_hg):
    with pytest.raises(NotIndependentError):
        run_container(union_hg(2), {1, 2, 3}, Params(0.1, 1, 1, 1), relaxed=True)


def test_strict_mode_checks_profile(union_hg):
    with pytest.raises(ParameterError, match="algorithm profile"):
        run_container(union_hg(2), set(), Params(0.1, 1, 1, 1))
    with pytest.raises(ParameterError, match="1-rooted"):
        hg = build_hypergraph(4, [(0, 1, 2, 2), (0, 1, 3, 3)])
        run_container(hg, set(), Params(0.1, 100, 8000, 1))
    run = run_container(union_hg(3), {1, 2}, Params(0.1, 100, 8000, 1))
    assert run.C == frozenset(range(8))


def test_phase_one_adds_fingerprint_and_link_edges():
    hg = c4_link_hypergraph()
    p = Params(0.5, 1, 2, 1, z=1)
    run = run_container(hg, {4}, p, relaxed=True)
    first = run.trace[0]
    assert (first.phase, first.v, first.in_I, first.degree) == ("I", 4, True, 4)
    assert first.L_edges == 2
    assert run.T == {4}
    assert 4 in run.C
    assert reconstruct(hg, run.T, run.T_prime, p) == run.C


def test_run_invariants_random():
    rng = random.Random(3)
    for i in range(60):
        hg = generate_synthetic_rooted(rng.randint(6, 40), rng.choice((0.2, 0.5, 0.9)), i)
        independent = random_independent_set(hg, rng)
        p = Params(rng.choice((0.1, 0.5)), rng.choice((1, 2, 3)), rng.choice((1, 2, 4)), 2, z=rng.choice((1, 2)))
        mode = rng.choice(("exact", "greedy"))
        run = run_container(hg, independent, p, mode=mode, relaxed=True)
        assert run.invariant_failures == []
        assert independent <= run.C
        assert run.T <= independent and run.T_prime <= independent
        assert reconstruct(hg, run.T, run.T_prime, p, mode) == run.C


def test_fingerprint_collisions_share_containers():
    rng = random.Random(17)
    collisions = 0
    for seed in range(40):
        hg = generate_synthetic_rooted(16, 0.6, seed)
        p = Params(0.5, 2, 2, 1, z=1)
        seen = {}
        for _ in range(25):
            independent = random_independent_set(hg, rng)
            run = run_container(hg, independent, p, relaxed=True)
            key = (run.T, run.T_prime)
            if key in seen and seen[key][0] != independent:
                collisions += 1
                assert seen[key][1] == run.C
            seen.setdefault(key, (independent, run.C))
    assert collisions > 0


def test_run_json_round_trip(union_hg):
    hg = union_hg(3)
    p = Params(Fraction(1, 3), 2, 2, 1, z=Fraction(3, 2))
    run = run_container(hg, {1, 2, 4}, p, relaxed=True)
    text = run.to_json()
    again = ContainerRun.from_json(text)
    assert again.to_json() == text
    assert again.C == run.C and again.params == run.params


def test_unknown_mode_rejected(union_hg):
    with pytest.raises(ValueError, match="mode"):
        run_container(union_hg(2), set(), Params(0.1, 1, 1, 1), mode="fast", relaxed=True)


def naive_first_eligible(hg, avail, s, t, mode):
    ranked = sorted(
        (-len(link), v, link)
        for v in avail
        for link in [[(a, b) for a, b in hg.head_pairs(v) if a in avail and b in avail]]
        if link
    )
    for _neg, v, link in ranked:
        if is_eligible(hg, avail, v, s, t, mode):
            return v, len(link)
    return None


def test_candidate_ranking_matches_naive_scan():
    from rooted_containers.engine import _first_eligible

    rng = random.Random(23)
    for seed in range(40):
        hg = generate_synthetic_rooted(rng.randint(5, 30), rng.choice((0.3, 0.8)), seed)
        avail = {v for v in hg.vertices if rng.random() < 0.85}
        s, t = rng.choice((1, 2, 3)), Fraction(rng.choice((1, 2, 3, 5)))
        got = _first_eligible(hg, avail, s, t, "exact")
        expected = naive_first_eligible(hg, avail, s, t, "exact")
        assert (got[:2] if got else None) == expected
