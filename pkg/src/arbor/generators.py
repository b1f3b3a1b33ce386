"""Deterministic instance generators for tests, benchmarks, and the CLI.

Every generator is a pure function of its parameters: same arguments,
same digraph, byte-identical serialization.
"""

from __future__ import annotations

import random

from .digraph import Digraph


def gnp(n: int, p: float, seed: int = 0) -> Digraph:
    """Random digraph: each ordered pair (u, v), u != v, kept with probability p."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability {p} outside [0, 1]")
    rng = random.Random(seed)
    arcs = [
        (u, v)
        for u in range(n)
        for v in range(n)
        if u != v and rng.random() < p
    ]
    return Digraph(n, arcs)


def dag(n: int, p: float = 0.4, seed: int = 0) -> Digraph:
    """Random acyclic digraph: arcs follow a hidden random vertex order."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability {p} outside [0, 1]")
    rng = random.Random(seed)
    order = list(range(n))
    rng.shuffle(order)
    arcs = [
        (order[i], order[j])
        for i in range(n)
        for j in range(i + 1, n)
        if rng.random() < p
    ]
    return Digraph(n, arcs)


def backward_complete_chain(n: int, close: bool = False) -> Digraph:
    """Chain v_0 -> ... -> v_{n+1} plus every arc v_i -> v_j with 1 <= j < i <= n.

    Unbounded-treewidth digraph whose out-branching and in-branching are
    unique and identical (the chain).  ``close`` adds the arc
    v_{n+1} -> v_0, making it strongly connected while keeping the
    branchings rooted at v_0 / v_{n+1} unique.
    """
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    arcs = [(i, i + 1) for i in range(n + 1)]
    arcs += [(i, j) for i in range(2, n + 1) for j in range(1, i)]
    if close:
        arcs.append((n + 1, 0))
    return Digraph(n + 2, arcs)


def degenerate_chain(n: int, extra: int = 0, seed: int = 0) -> Digraph:
    """Bidirected path 0..n-1, optionally with `extra` random upward arcs.

    Rooted at 0, the decomposition is a chain of two-vertex diblocks; the
    optional upward arcs (deep tail, shallow head, skipping neighbours)
    exercise back-arc classification without changing the chain shape.
    """
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    arcs = {(i, i + 1) for i in range(n - 1)}
    arcs |= {(i + 1, i) for i in range(n - 1)}
    rng = random.Random(seed)
    candidates = [(i, j) for i in range(n) for j in range(n) if i - j >= 2]
    rng.shuffle(candidates)
    for a in candidates[: max(0, extra)]:
        arcs.add(a)
    return Digraph(n, sorted(arcs))


def bidirected_cycle(n: int) -> Digraph:
    """Cycle 0 -> 1 -> ... -> 0 with every arc doubled in reverse."""
    if n < 3:
        raise ValueError(f"need n >= 3, got {n}")
    arcs = [(i, (i + 1) % n) for i in range(n)]
    arcs += [((i + 1) % n, i) for i in range(n)]
    return Digraph(n, sorted(arcs))


def diamond_with_tail() -> Digraph:
    """The five-vertex fixture 0 -> {1,2} -> 3 -> 4 used throughout the tests."""
    return Digraph(5, [(0, 1), (0, 2), (1, 3), (2, 3), (3, 4)])
