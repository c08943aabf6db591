"""Seeded container-run cases shared by the engine tests and the acceptance suite."""

import random
from dataclasses import dataclass

from rooted_containers import Params, build_hypergraph, build_union_hypergraph, generate_synthetic_rooted
from rooted_containers.family import random_independent_set

EPS_CHOICES = (0.05, 0.1, 0.3, 0.5)
S_CHOICES = (1, 2, 3, 4)
T_CHOICES = (1, 2, 3, 5, 8)
N_CHOICES = (1, 2, 5, 10)
Z_CHOICES = (None, 1, 2, 3)


@dataclass
class Case:
    label: str
    hg: object
    independent: frozenset
    params: Params
    mode: str


def container_cases(count: int = 520, seed: int = 2024) -> list[Case]:
    rng = random.Random(seed)
    unions = {n: build_union_hypergraph(n) for n in (1, 2, 3, 4)}
    cases = []
    for i in range(count):
        if i % 5 == 0:
            n = rng.choice((2, 3, 4, 4))
            hg, label = unions[n], f"union n={n}"
        else:
            m = rng.randint(5, 60)
            density = rng.choice((0.05, 0.15, 0.3, 0.6, 0.9))
            hg, label = generate_synthetic_rooted(m, density, seed=i), f"synthetic M={m} d={density}"
        independent = random_independent_set(hg, rng, keep_prob=rng.choice((0.2, 0.5, 0.9)))
        params = Params(
            rng.choice(EPS_CHOICES),
            rng.choice(S_CHOICES),
            rng.choice(T_CHOICES),
            rng.choice(N_CHOICES),
            z=rng.choice(Z_CHOICES),
        )
        cases.append(Case(f"#{i} {label}", hg, independent, params, rng.choice(("exact", "greedy"))))
    return cases


BLOCK = 160
SHIFTS = 50


def certifiable_instance(blocks: int = 13):
    """1-rooted hypergraph where every head has an 8000-edge link graph of max degree <= 100.

    Base vertices come in blocks of 160. Each head owns 50 shift matchings
    between two blocks, or the 50 shortest circulant differences inside one
    block, so the non-head pairs of distinct heads never coincide.
    """
    base = BLOCK * blocks
    links = []
    for i in range(blocks):
        for j in range(i + 1, blocks):
            for g in range(BLOCK // SHIFTS):
                links.append(
                    [(BLOCK * i + x, BLOCK * j + (x + d) % BLOCK) for d in range(g * SHIFTS, (g + 1) * SHIFTS) for x in range(BLOCK)]
                )
        links.append([(BLOCK * i + x, BLOCK * i + (x + d) % BLOCK) for d in range(1, SHIFTS + 1) for x in range(BLOCK)])
    edges = [(a, b, base + h, base + h) for h, pairs in enumerate(links) for a, b in pairs]
    return build_hypergraph(base + len(links), edges), base
