"""Exhaustive branching enumeration.

Complete and deterministic (lexicographic in (vertex, chosen parent)), used
by the capped exact solver and as a reference point in tests.  Strictly
exponential; callers are expected to gate on instance size.
"""

from __future__ import annotations

from typing import Iterator

from .digraph import Digraph

Arc = tuple[int, int]


def enumerate_out_branchings(d: Digraph, root: int) -> Iterator[frozenset[Arc]]:
    """Yield the arc set of every spanning out-branching rooted at ``root``.

    Each non-root vertex picks an in-arc in ascending vertex order; a pick
    that closes a directed cycle among the picks so far is pruned, so every
    completed assignment is a branching.
    """
    if not (0 <= root < d.n):
        raise ValueError(f"root {root} out of range")
    if d.n == 1:
        yield frozenset()
        return
    others = [v for v in range(d.n) if v != root]
    parent = [-1] * d.n
    in_adj = d.in_adj

    def closes_cycle(v: int, u: int) -> bool:
        while u != -1:
            if u == v:
                return True
            u = parent[u]
        return False

    def rec(i: int) -> Iterator[frozenset[Arc]]:
        if i == len(others):
            yield frozenset((parent[v], v) for v in others)
            return
        v = others[i]
        for u in in_adj[v]:
            if not closes_cycle(v, u):
                parent[v] = u
                yield from rec(i + 1)
                parent[v] = -1

    yield from rec(0)


def enumerate_in_branchings(d: Digraph, root: int) -> Iterator[frozenset[Arc]]:
    """Yield the arc set of every spanning in-branching rooted at ``root``."""
    for arcs in enumerate_out_branchings(d.reverse(), root):
        yield frozenset((v, u) for u, v in arcs)
