"""Two-disjoint-path primitives built on unit-capacity flows.

A vertex v is *bi-reachable* from r when two r->v paths exist that share no
internal vertex.  The diblock of r collects r, its out-neighbours and its
bi-reachable vertices; it is the basic building block of the cut
decomposition.  All functions take an optional ``within`` vertex set and
then operate on the induced subdigraph.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from ._kernels import bireach
from .digraph import ContractViolation, Digraph, Path, VertexSet, _mask, reachable_set


@dataclass(frozen=True, slots=True)
class DisjointPathPair:
    """Two directed paths out of a common origin r.

    For distinct targets the paths intersect exactly in r; when both end in
    the same vertex v they additionally share v but nothing else.
    """

    r: int
    p1: Path
    p2: Path


def bfs_path(
    d: Digraph,
    src: int,
    dst: int,
    within: Iterable[int] | None = None,
    avoid: Iterable[int] = (),
) -> Path | None:
    """Deterministic shortest path (lowest-id BFS); None when unreachable.

    ``avoid`` removes vertices (src/dst may not be avoided).
    """
    banned = set(avoid)
    if src in banned or dst in banned:
        raise ContractViolation(f"bfs_path endpoints in avoid set: {src}, {dst}")
    ok = None if within is None else set(within)
    if ok is not None and (src not in ok or dst not in ok):
        return None

    def allowed(v: int) -> bool:
        return v not in banned and (ok is None or v in ok)

    prev = {src: -1}
    queue = [src]
    head = 0
    while head < len(queue):
        u = queue[head]
        head += 1
        if u == dst:
            break
        for v in d.out_adj[u]:
            if v not in prev and allowed(v):
                prev[v] = u
                queue.append(v)
    if dst not in prev:
        return None
    path = [dst]
    while path[-1] != src:
        path.append(prev[path[-1]])
    path.reverse()
    return tuple(path)


def bi_reachable_set(
    d: Digraph, r: int, within: Iterable[int] | None = None
) -> VertexSet:
    """All v != r with two internally vertex-disjoint r->v paths."""
    if not (0 <= r < d.n):
        raise ValueError(f"vertex {r} out of range")
    indptr, indices = d.csr()
    flags = bireach(d.n, indptr, indices, r, _mask(d.n, within))
    return frozenset(v for v in range(d.n) if flags[v])


def diblock(d: Digraph, r: int, within: Iterable[int] | None = None) -> VertexSet:
    """B_r: r, its out-neighbours, and everything bi-reachable from r.

    Requires at least two vertices in scope and every in-scope vertex
    reachable from r.
    """
    scope = frozenset(range(d.n)) if within is None else frozenset(within)
    if r not in scope:
        raise ContractViolation(f"diblock root {r} outside its vertex set")
    if len(scope) < 2:
        raise ContractViolation("diblock needs at least two vertices")
    if reachable_set(d, r, scope) != scope:
        raise ContractViolation(f"diblock root {r} does not reach its whole vertex set")
    succ = frozenset(v for v in d.out_adj[r] if v in scope)
    return bi_reachable_set(d, r, scope) | succ | {r}


# -- flow-based path extraction ------------------------------------------


def _unit_network(d: Digraph, scope: frozenset[int] | None):
    """Vertex-split unit network over the in-scope part of d.

    Returns (to, cap, adj); node 2v is the entry copy of v, 2v+1 the exit
    copy, and residual arcs pair up as idx ^ 1.  Arcs are inserted in
    sorted order so BFS tie-breaking is deterministic.
    """
    to: list[int] = []
    cap: list[int] = []
    adj: list[list[int]] = [[] for _ in range(2 * d.n)]

    def add(a: int, b: int) -> None:
        adj[a].append(len(to))
        to.append(b)
        cap.append(1)
        adj[b].append(len(to))
        to.append(a)
        cap.append(0)

    for v in range(d.n):
        if scope is None or v in scope:
            add(2 * v, 2 * v + 1)
    for u, v in d.arcs:
        if scope is None or (u in scope and v in scope):
            add(2 * u + 1, 2 * v)
    return to, cap, adj


def _augment_once(source: int, sink: int, to, cap, adj) -> bool:
    parent = [-1] * len(adj)
    parent[source] = -2
    queue = [source]
    head = 0
    while head < len(queue):
        u = queue[head]
        head += 1
        for idx in adj[u]:
            v = to[idx]
            if cap[idx] > 0 and parent[v] == -1:
                parent[v] = idx
                if v == sink:
                    while v != source:
                        idx = parent[v]
                        cap[idx] -= 1
                        cap[idx ^ 1] += 1
                        v = to[idx ^ 1]
                    return True
                queue.append(v)
    return False


def _walk_flow_path(source: int, sink: int, to, cap, adj, used: set[int]) -> list[int]:
    """Follow one unit of flow from source to sink, consuming its arcs.

    Delivers split-world nodes in order.  Among several flow-carrying
    out-arcs the lowest-indexed one wins (insertion order is sorted, so
    this is the lowest-head tie-break).
    """
    node = source
    walk = [source]
    while node != sink:
        step = -1
        for idx in adj[node]:
            if idx % 2 == 0 and cap[idx] == 0 and idx not in used:
                step = idx
                break
        if step == -1:
            raise ContractViolation("flow walk stuck: conservation violated")
        used.add(step)
        node = to[step]
        walk.append(node)
    return walk


def two_disjoint_paths(d: Digraph, r: int, x: int, y: int,
                       within: Iterable[int] | None = None) -> DisjointPathPair:
    """An r->x path and an r->y path intersecting only in r.

    x and y must lie in diblock(d, r).  One of them may equal r, giving the
    single-vertex path.  With x == y != r the result is two internally
    disjoint r->x paths (x must then be bi-reachable from r).
    """
    scope = frozenset(range(d.n)) if within is None else frozenset(within)
    for v in (r, x, y):
        if v not in scope:
            raise ContractViolation(f"vertex {v} outside the requested scope")
    if r == x and r == y:
        return DisjointPathPair(r, (r,), (r,))
    if r == x or r == y:
        other = y if r == x else x
        if other not in diblock(d, r, scope):
            raise ContractViolation(f"{other} not in the diblock of {r}")
        p = bfs_path(d, r, other, scope)
        if p is None:
            raise ContractViolation(f"no path {r} -> {other} inside the scope")
        return DisjointPathPair(r, (r,), p) if r == x else DisjointPathPair(r, p, (r,))

    if x == y:
        if x not in bi_reachable_set(d, r, scope):
            raise ContractViolation(f"{x} not bi-reachable from {r}")
    else:
        blk = diblock(d, r, scope)
        outside = [v for v in (x, y) if v not in blk]
        if outside:
            raise ContractViolation(f"{outside} not in the diblock of {r}")

    if x == y:
        # value-2 flow straight into the entry copy of x
        to, cap, adj = _unit_network(d, scope)
        source, sink = 2 * r + 1, 2 * x
    else:
        # auxiliary sink z past x and y, then drop it from the walks
        aug = Digraph(d.n + 1, list(d.arcs) + [(x, d.n), (y, d.n)])
        to, cap, adj = _unit_network(aug, scope | {d.n})
        source, sink = 2 * r + 1, 2 * aug.n - 2

    if not (_augment_once(source, sink, to, cap, adj)
            and _augment_once(source, sink, to, cap, adj)):
        raise ContractViolation(
            f"no two disjoint paths from {r} to {{{x}, {y}}}: diblock precondition broken"
        )
    used: set[int] = set()
    walks = [
        _walk_flow_path(source, sink, to, cap, adj, used),
        _walk_flow_path(source, sink, to, cap, adj, used),
    ]
    paths: list[Path] = []
    for walk in walks:
        verts = [r] + [node // 2 for node in walk if node % 2 == 0]
        if x != y and verts[-1] == d.n:
            verts.pop()
        paths.append(tuple(verts))
    if x != y and paths[0][-1] != x:
        paths.reverse()
    if x == y:
        paths.sort()
    p1, p2 = paths
    if p1[-1] != x or p2[-1] != y:
        raise ContractViolation("flow decomposition returned wrong endpoints")
    return DisjointPathPair(r, p1, p2)
