"""Shared fixtures: deterministic corpora and a few hand-built digraphs."""

from __future__ import annotations

import random

import pytest

from arbor.digraph import (
    Digraph,
    has_rooted_in_branching,
    has_rooted_out_branching,
)


def random_digraph(rng: random.Random, n: int, p: float) -> Digraph:
    return Digraph(
        n,
        [(u, v) for u in range(n) for v in range(n) if u != v and rng.random() < p],
    )


def corpus(seed: int, count: int, n_lo: int, n_hi: int, densities) -> list[Digraph]:
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        out.append(random_digraph(rng, rng.randint(n_lo, n_hi), rng.choice(densities)))
    return out


@pytest.fixture(scope="session")
def small_corpus() -> list[Digraph]:
    """The workhorse corpus: 150 digraphs with n <= 8, mixed density."""
    return corpus(0xA55, 150, 2, 8, (0.15, 0.3, 0.5, 0.8))


@pytest.fixture(scope="session")
def rooted_instances(small_corpus) -> list[tuple[Digraph, int, int]]:
    """(d, s, t) triples where a rooted out- and in-branching both exist."""
    rng = random.Random(0xBEE)
    out = []
    for d in small_corpus:
        for _ in range(2):
            s, t = rng.randrange(d.n), rng.randrange(d.n)
            if has_rooted_out_branching(d, s) and has_rooted_in_branching(d, t):
                out.append((d, s, t))
    return out


@pytest.fixture
def diamond() -> Digraph:
    """0 -> {1, 2} -> 3 -> 4."""
    return Digraph(5, [(0, 1), (0, 2), (1, 3), (2, 3), (3, 4)])


@pytest.fixture
def two_block_instance() -> Digraph:
    """Seven vertices, root 5: decomposition with two sibling subtrees.

    Carries the arc (0, 2) from inside one sibling region into the top of
    the other — the shape that forces the corrected subtree-entry rule.
    """
    return Digraph(
        7,
        [(0, 1), (0, 2), (0, 4), (0, 6), (1, 0), (1, 5), (1, 6), (2, 3),
         (2, 5), (3, 5), (4, 1), (4, 6), (5, 1), (5, 2), (5, 4), (6, 5)],
    )


@pytest.fixture
def chain_with_returns() -> Digraph:
    """Bidirected 6-chain plus a feedback 2-cycle through vertex 6."""
    return Digraph(
        7,
        [(0, 1), (1, 0), (1, 2), (2, 1), (2, 3), (3, 2), (3, 4), (4, 3),
         (4, 5), (5, 4), (5, 3), (6, 0), (5, 6), (0, 6), (6, 5)],
    )


@pytest.fixture
def ladder_with_up_arcs() -> Digraph:
    """Bidirected 10-chain with upward arcs from deep vertices."""
    arcs = [(i, i + 1) for i in range(9)] + [(i + 1, i) for i in range(9)]
    arcs += [(4, 0), (6, 1), (8, 2), (9, 0), (7, 0), (5, 1)]
    return Digraph(10, sorted(set(arcs)))
