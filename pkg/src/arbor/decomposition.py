"""Rooted cut decompositions.

The decomposition tree of a digraph rooted at r is built recursively: take
the diblock B_r, split the outside vertices by the bottleneck through which
every path to them must leave B_r, and recurse into each part.  Tree nodes
are identified with their (distinct) host vertices.  The structure is the
backbone of the solver: it yields forbidden back arcs, degenerate paths and
the avoid-half routing bound.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Mapping

from .digraph import ContractViolation, Digraph, Path, VertexSet, reachable_set
from .flow import bi_reachable_set, diblock, two_disjoint_paths

Arc = tuple[int, int]


@dataclass(frozen=True, slots=True)
class DegeneratePath:
    """A maximal monotone run of internal tree nodes with 2-vertex diblocks.

    ``nodes`` is the run itself; ``realization`` appends the single child of
    the last node, giving a directed path that exists arc-by-arc in the
    host.
    """

    nodes: tuple[int, ...]
    realization: tuple[int, ...]


class CutDecomposition:
    """The r-rooted cut decomposition of a digraph.

    Immutable after construction.  ``parent`` maps every non-root node to
    its tree parent, ``diblocks`` maps every node x to B_x, and ``home``
    maps every vertex v != r to the unique node x with v in B_x - {x}.
    """

    __slots__ = (
        "host",
        "root",
        "parent",
        "children",
        "diblocks",
        "order",
        "depth",
        "home",
        "_subtree",
        "_tin",
        "_tout",
    )

    def __init__(
        self,
        host: Digraph,
        root: int,
        parent: Mapping[int, int],
        diblocks: Mapping[int, VertexSet],
    ):
        self.host = host
        self.root = root
        self.parent = dict(parent)
        self.diblocks = {x: frozenset(b) for x, b in diblocks.items()}
        kids: dict[int, list[int]] = {x: [] for x in self.diblocks}
        for y, x in sorted(self.parent.items()):
            kids[x].append(y)
        self.children = {x: tuple(sorted(c)) for x, c in kids.items()}
        # deterministic preorder plus entry/exit times for ancestor tests
        order: list[int] = []
        tin: dict[int, int] = {}
        tout: dict[int, int] = {}
        depth: dict[int, int] = {}
        clock = 0
        stack: list[tuple[int, int, bool]] = [(root, 1, False)]
        while stack:
            x, d, done = stack.pop()
            if done:
                tout[x] = clock
                continue
            order.append(x)
            tin[x] = clock
            clock += 1
            depth[x] = d
            stack.append((x, d, True))
            for c in reversed(self.children[x]):
                stack.append((c, d + 1, False))
        self.order = tuple(order)
        self.depth = depth
        self._tin = tin
        self._tout = tout
        home: dict[int, int] = {root: root}
        for x in self.order:
            for v in self.diblocks[x]:
                if v != x:
                    if v in home:
                        raise ContractViolation(
                            f"vertex {v} claimed by diblocks of {home[v]} and {x}"
                        )
                    home[v] = x
        self.home = home
        self._subtree: dict[int, VertexSet] = {}

    # -- structure queries ------------------------------------------------

    @property
    def nodes(self) -> tuple[int, ...]:
        return self.order

    def is_node(self, v: int) -> bool:
        return v in self.diblocks

    def is_internal(self, x: int) -> bool:
        return bool(self.children[x])

    def is_degenerate(self, x: int) -> bool:
        """Internal node whose diblock has exactly two vertices."""
        return self.is_internal(x) and len(self.diblocks[x]) == 2

    def partner(self, x: int) -> int:
        """The other vertex of a degenerate node's diblock."""
        rest = self.diblocks[x] - {x}
        if len(rest) != 1:
            raise ContractViolation(f"node {x} is not degenerate")
        return next(iter(rest))

    def is_ancestor(self, a: int, b: int) -> bool:
        """True iff node a lies on the tree path from the root to node b (a = b counts)."""
        return self._tin[a] <= self._tin[b] and self._tout[b] <= self._tout[a]

    def node_path(self, x: int) -> tuple[int, ...]:
        """Tree path from the root down to node x, inclusive."""
        rev = [x]
        while rev[-1] != self.root:
            rev.append(self.parent[rev[-1]])
        return tuple(reversed(rev))

    def subtree_nodes(self, x: int) -> tuple[int, ...]:
        lo, hi = self._tin[x], self._tout[x]
        return tuple(y for y in self.order if lo <= self._tin[y] and self._tout[y] <= hi)

    def subtree_vertices(self, x: int) -> VertexSet:
        """B*_x: every vertex of every diblock in the subtree of x."""
        cached = self._subtree.get(x)
        if cached is None:
            acc: set[int] = set()
            for y in self.subtree_nodes(x):
                acc |= self.diblocks[y]
            cached = frozenset(acc)
            self._subtree[x] = cached
        return cached

    def height(self) -> int:
        """Number of nodes on the longest root-to-leaf tree path."""
        return max(self.depth.values())

    def deepest_node_for(self, v: int) -> int:
        """The deepest node whose diblock contains v (v itself if v is a node)."""
        return v if v in self.diblocks else self.home[v]

    def to_json(self) -> str:
        obj = {
            "root": self.root,
            "parent": {str(y): x for y, x in sorted(self.parent.items())},
            "diblocks": {str(x): sorted(b) for x, b in self.diblocks.items()},
        }
        return json.dumps(obj, indent=2, sort_keys=True)


# -- construction ---------------------------------------------------------


def _partition_scoped(
    d: Digraph, r: int, b_r: VertexSet, scope: VertexSet
) -> dict[int, VertexSet]:
    """Split scope - B_r by last-exit bottleneck; keys with empty parts drop out.

    Each outside vertex must land in exactly one part (that is the content
    of the uniqueness lemma); a double claim or a leftover vertex means a
    broken invariant, not bad input.
    """
    outside = scope - b_r
    result: dict[int, VertexSet] = {}
    owner: dict[int, int] = {}
    for x in sorted(b_r - {r}):
        part = reachable_set(d, x, outside | {x}) - {x}
        if not part:
            continue
        for v in part:
            if v in owner:
                raise ContractViolation(
                    f"vertex {v} reachable past both bottlenecks {owner[v]} and {x}"
                )
            owner[v] = x
        result[x] = part
    missing = outside - set(owner)
    if missing:
        raise ContractViolation(f"vertices {sorted(missing)} not behind any bottleneck")
    return result


def bottleneck_partition(
    d: Digraph, r: int, b_r: VertexSet, within: Iterable[int] | None = None
) -> dict[int, VertexSet]:
    """Map each bottleneck x in B_r - {r} to the vertices hidden behind it.

    X_x is what x still reaches after B_r - {x} is removed; the parts are
    pairwise disjoint and cover everything outside B_r.
    """
    scope = frozenset(range(d.n)) if within is None else frozenset(within)
    if reachable_set(d, r, scope) != scope:
        raise ContractViolation(f"not every vertex is reachable from {r}")
    if frozenset(b_r) != diblock(d, r, scope):
        raise ContractViolation(f"b_r is not the diblock of {r}")
    return _partition_scoped(d, r, frozenset(b_r), scope)


def build_cut_decomposition(d: Digraph, r: int) -> CutDecomposition:
    """Construct the r-rooted cut decomposition (unique and deterministic)."""
    if d.n < 2:
        raise ContractViolation("cut decomposition needs at least two vertices")
    if len(reachable_set(d, r)) != d.n:
        raise ContractViolation(f"not every vertex is reachable from {r}")
    parent: dict[int, int] = {}
    diblocks: dict[int, VertexSet] = {}
    stack: list[tuple[int, VertexSet]] = [(r, frozenset(range(d.n)))]
    while stack:
        x, scope = stack.pop()
        b = diblock(d, x, scope)
        diblocks[x] = b
        part = _partition_scoped(d, x, b, scope)
        for y in sorted(part, reverse=True):
            parent[y] = x
            stack.append((y, part[y] | {y}))
    return CutDecomposition(d, r, parent, diblocks)


# -- validation -------------------------------------------------------------


def validate(dec: CutDecomposition) -> list[str]:
    """All violations of the decomposition invariants (empty = sound).

    Each message is prefixed with the clause it violates: partition,
    diblock-intersection, arc-classification, subtree-entry, sibling-arcs,
    or cover.
    """
    d = dec.host
    bad: list[str] = []

    # partition: {B_x - {x}} non-empty, disjoint, exactly V - {r}
    seen: dict[int, int] = {}
    for x in dec.order:
        rest = dec.diblocks[x] - {x}
        if not rest:
            bad.append(f"partition: diblock of {x} has no second vertex")
        for v in sorted(rest):
            if v in seen:
                bad.append(f"partition: {v} in diblocks of both {seen[v]} and {x}")
            seen[v] = x
    expect = set(range(d.n)) - {dec.root}
    if set(seen) != expect:
        extra = sorted(set(seen) - expect)
        missing = sorted(expect - set(seen))
        bad.append(f"partition: extra {extra}, missing {missing}")

    # pairwise diblock intersections
    for i, x in enumerate(dec.order):
        for y in dec.order[i + 1:]:
            got = dec.diblocks[x] & dec.diblocks[y]
            if dec.parent.get(y) == x:
                want = {y}
            elif dec.parent.get(x) == y:
                want = {x}
            else:
                want = set()
            if got != want:
                bad.append(
                    f"diblock-intersection: B_{x} and B_{y} share {sorted(got)}, "
                    f"expected {sorted(want)}"
                )

    # every arc internal to a diblock or a back arc to an ancestor diblock
    def hosts(v: int) -> list[int]:
        hs = [dec.home[v]] if v in dec.home else []
        if dec.is_node(v):
            hs.append(v)
        return hs

    for u, v in d.arcs:
        ok = any(
            dec.is_ancestor(xv, xu) for xu in hosts(u) for xv in hosts(v)
        )
        if not ok:
            bad.append(f"arc-classification: arc ({u}, {v}) is neither internal nor back")

    # subtree entries and sibling separation; entries must aim at the top
    # node, with tails confined to the parent's own subtree region
    for y in dec.order:
        if y == dec.root:
            continue
        sub = dec.subtree_vertices(y)
        pr = dec.subtree_vertices(dec.parent[y])
        for u, v in d.arcs:
            if v in sub and u not in sub and not (v == y and u in pr):
                bad.append(
                    f"subtree-entry: arc ({u}, {v}) enters the subtree of {y} "
                    f"other than into {y} from its parent's region"
                )
    for x in dec.order:
        kids = dec.children[x]
        for i, y in enumerate(kids):
            for y2 in kids[i + 1:]:
                a = dec.subtree_vertices(y) - {y}
                b = dec.subtree_vertices(y2) - {y2}
                for u, v in d.arcs:
                    if (u in a and v in b) or (u in b and v in a):
                        bad.append(
                            f"sibling-arcs: arc ({u}, {v}) joins the subtrees "
                            f"of siblings {y} and {y2}"
                        )

    # diblocks cover V
    covered = set()
    for b in dec.diblocks.values():
        covered |= b
    if covered != set(range(d.n)):
        bad.append(f"cover: vertices {sorted(set(range(d.n)) - covered)} uncovered")

    return bad


# -- consequences used by the solver ------------------------------------------


def forbidden_back_arcs(dec: CutDecomposition) -> frozenset[Arc]:
    """Arcs (u, v) where some diblock containing u has its node inside the
    subtree of v; no rooted out-branching can use such an arc."""
    d = dec.host
    out: set[Arc] = set()
    for u, v in d.arcs:
        if not dec.is_node(v):
            continue
        cands = [dec.home[u]] if u in dec.home else []
        if dec.is_node(u):
            cands.append(u)
        if any(dec.is_ancestor(v, x) for x in cands):
            out.add((u, v))
    return frozenset(out)


def fins(dec: CutDecomposition, nodes: tuple[int, ...]) -> list[frozenset[int]]:
    """Fin node sets of a monotone path: what each node's subtree keeps
    after removing the next node's subtree (the last keeps everything)."""
    for a, b in zip(nodes, nodes[1:]):
        if dec.parent.get(b) != a:
            raise ContractViolation(f"{nodes} is not a monotone tree path")
    out = []
    for i, x in enumerate(nodes):
        keep = set(dec.subtree_nodes(x))
        if i + 1 < len(nodes):
            keep -= set(dec.subtree_nodes(nodes[i + 1]))
        out.append(frozenset(keep))
    return out


def check_bottleneck_order(dec: CutDecomposition, p: Path, v: int) -> bool:
    """Test predicate: does the path meet the tree nodes in tree order?

    For an r->v host path the subsequence of tree nodes must equal the tree
    path from the root to the deepest node holding v, each stretch between
    consecutive nodes must stay in the earlier node's fin diblocks, and the
    tail after the last node must stay inside its diblock.
    """
    if not p or p[0] != dec.root or p[-1] != v:
        return False
    x = dec.deepest_node_for(v)
    expected = dec.node_path(x)
    hits = tuple(w for w in p if dec.is_node(w))
    if hits != expected:
        return False
    # fin confinement between consecutive nodes, containment after the last
    pos = {w: i for i, w in enumerate(p)}
    for a, b in zip(expected, expected[1:]):
        region: set[int] = set()
        for y in set(dec.subtree_nodes(a)) - set(dec.subtree_nodes(b)):
            region |= dec.diblocks[y]
        for w in p[pos[a] + 1 : pos[b]]:
            if w not in region:
                return False
    for w in p[pos[x] + 1 :]:
        if w not in dec.diblocks[x]:
            return False
    return True


# -- avoid-half routing ---------------------------------------------------------


def _route_avoiding(dec: CutDecomposition, u: int, x_set: frozenset[int]) -> Path:
    """Root-to-u path meeting at most half of x_set.

    Needs that x_set avoids u and the tree nodes on the route.  Per
    segment the cheaper of a direct arc (intersection zero) and the better
    of two internally disjoint paths is taken; segment interiors live in
    pairwise disjoint regions, so the local halves sum to a global half.
    """
    d = dec.host
    goal = dec.deepest_node_for(u)
    spine = dec.node_path(goal)
    blocked = set(spine) | {u}
    if x_set & blocked:
        raise ContractViolation(
            f"avoid set touches the route: {sorted(x_set & blocked)}"
        )
    hops: list[tuple[int, int]] = list(zip(spine, spine[1:]))
    if u != goal:
        hops.append((goal, u))
    path: list[int] = [dec.root]
    for a, b in hops:
        if d.has_arc(a, b):
            seg: Path = (a, b)
        else:
            pair = two_disjoint_paths(d, a, b, b, within=dec.subtree_vertices(a))
            seg = min(
                (pair.p1, pair.p2),
                key=lambda q: (sum(1 for w in q[1:-1] if w in x_set), q),
            )
        path.extend(seg[1:])
    if len(set(path)) != len(path):
        raise ContractViolation(f"routed walk revisits a vertex: {path}")
    return tuple(path)


def avoid_half_path(dec: CutDecomposition, u: int, x_set: Iterable[int]) -> Path:
    """A root-to-u path P with |P ∩ X| <= |X|/2.

    X must consist of non-tree vertices and must avoid u (contract error
    otherwise).  Per segment the route offers two internally disjoint
    paths and every X vertex can sit on at most one of them, so picking
    the cheaper one per segment keeps the global intersection at half.
    """
    xs = frozenset(x_set)
    bad = xs & (frozenset(dec.diblocks) | {u})
    if bad:
        raise ContractViolation(
            f"avoid set contains tree nodes or the target: {sorted(bad)}"
        )
    return _route_avoiding(dec, u, xs)


# -- degenerate structure ---------------------------------------------------------


def degenerate_paths(dec: CutDecomposition) -> list[DegeneratePath]:
    """Maximal runs of degenerate nodes, in preorder of their first node."""
    out: list[DegeneratePath] = []
    for x in dec.order:
        if not dec.is_degenerate(x):
            continue
        p = dec.parent.get(x)
        if p is not None and dec.is_degenerate(p):
            continue  # not the start of a maximal run
        run = [x]
        while True:
            kids = dec.children[run[-1]]
            if len(kids) != 1:
                raise ContractViolation(
                    f"degenerate node {run[-1]} has {len(kids)} children"
                )
            nxt = kids[0]
            if nxt != dec.partner(run[-1]):
                raise ContractViolation(
                    f"degenerate node {run[-1]} continues to {nxt}, "
                    f"not its diblock partner"
                )
            if not dec.is_degenerate(nxt):
                break
            run.append(nxt)
        realization = tuple(run) + (dec.partner(run[-1]),)
        for a, b in zip(realization, realization[1:]):
            if not dec.host.has_arc(a, b):
                raise ContractViolation(
                    f"degenerate run {realization} is not a host path at ({a}, {b})"
                )
        out.append(DegeneratePath(tuple(run), realization))
    return out


def longest_monotone_path(dec: CutDecomposition) -> tuple[tuple[int, ...], int]:
    """Longest root-to-leaf node path and its count of non-degenerate diblocks.

    Ties break toward the lexicographically smallest node sequence.
    """

    def down(x: int) -> tuple[int, ...]:
        best: tuple[int, ...] = ()
        for c in dec.children[x]:
            cand = down(c)
            if len(cand) > len(best) or (len(cand) == len(best) and cand < best):
                best = cand
        return (x,) + best

    path = down(dec.root)
    nondegen = sum(1 for x in path if not dec.is_degenerate(x))
    return path, nondegen
