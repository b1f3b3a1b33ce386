"""Branching algorithms: optimum branchings, forcing tests, extensions.

Weights may be ints or Fractions; everything is scaled to exact integers
before hitting the Edmonds kernel, so there are no floating-point ties.
In-branching variants run the out-branching machinery on the reverse
digraph and flip the result back.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence, Union

from . import _kernels
from ._kernels import _pykernels
from .digraph import ContractViolation, Digraph, has_rooted_out_branching

Arc = tuple[int, int]
Weights = Union[
    Mapping[Arc, Union[int, Fraction]],
    Sequence[Union[int, Fraction]],
    Callable[[Arc], Union[int, Fraction]],
]

# largest adjusted weight the int64 kernel may see before we route the
# call to the arbitrary-precision Python kernel instead
_INT64_SAFE = 2**62


@dataclass(frozen=True, slots=True)
class OutTree:
    """A rooted out-tree, not necessarily spanning; arcs point away from root."""

    root: int
    arcs: frozenset[Arc]

    @property
    def vertices(self) -> frozenset[int]:
        vs = {self.root}
        for u, v in self.arcs:
            vs.add(u)
            vs.add(v)
        return frozenset(vs)

    def leaves(self) -> frozenset[int]:
        tails = {u for u, _ in self.arcs}
        return frozenset(v for v in self.vertices if v not in tails)


@dataclass(frozen=True, slots=True)
class InTree:
    """A rooted in-tree; arcs point toward the root (host orientation)."""

    root: int
    arcs: frozenset[Arc]

    @property
    def vertices(self) -> frozenset[int]:
        vs = {self.root}
        for u, v in self.arcs:
            vs.add(u)
            vs.add(v)
        return frozenset(vs)

    def leaves(self) -> frozenset[int]:
        heads = {v for _, v in self.arcs}
        return frozenset(v for v in self.vertices if v not in heads)


@dataclass(frozen=True, slots=True)
class Branching:
    """A spanning out- or in-branching of its host digraph."""

    host: Digraph
    root: int
    orientation: str  # "out" | "in"
    arcs: frozenset[Arc]

    def leaves(self) -> frozenset[int]:
        if self.orientation == "out":
            tails = {u for u, _ in self.arcs}
            return frozenset(v for v in range(self.host.n) if v not in tails)
        heads = {v for _, v in self.arcs}
        return frozenset(v for v in range(self.host.n) if v not in heads)


def count_leaves(t: OutTree | InTree | Branching) -> int:
    return len(t.leaves())


# -- validation ------------------------------------------------------------


def out_tree_violations(d: Digraph, t: OutTree) -> list[str]:
    """Human-readable list of rooted-out-tree violations (empty = valid)."""
    bad = []
    for a in sorted(t.arcs):
        if a not in d.arc_positions:
            bad.append(f"arc {a} not in host")
    indeg: dict[int, int] = {}
    for _, v in t.arcs:
        indeg[v] = indeg.get(v, 0) + 1
    if indeg.get(t.root):
        bad.append(f"root {t.root} has an in-arc")
    for v, c in sorted(indeg.items()):
        if c > 1:
            bad.append(f"vertex {v} has in-degree {c}")
    # reach everything covered from the root along tree arcs
    kids: dict[int, list[int]] = {}
    for u, v in sorted(t.arcs):
        kids.setdefault(u, []).append(v)
    seen = {t.root}
    stack = [t.root]
    while stack:
        for w in kids.get(stack.pop(), ()):
            if w not in seen:
                seen.add(w)
                stack.append(w)
    if seen != t.vertices:
        bad.append(f"not connected: {sorted(t.vertices - seen)} unreachable from root")
    return bad


def in_tree_violations(d: Digraph, t: InTree) -> list[str]:
    flipped = OutTree(t.root, frozenset((v, u) for u, v in t.arcs))
    out = out_tree_violations(d.reverse(), flipped)
    return [msg.replace("in-arc", "out-arc").replace("in-degree", "out-degree")
            for msg in out]


def branching_violations(b: Branching) -> list[str]:
    """Violations of the spanning-branching contract (empty = valid)."""
    d = b.host
    if b.orientation not in ("out", "in"):
        return [f"unknown orientation {b.orientation!r}"]
    if len(b.arcs) != max(d.n - 1, 0):
        return [f"expected {d.n - 1} arcs, got {len(b.arcs)}"]
    if b.orientation == "out":
        bad = out_tree_violations(d, OutTree(b.root, b.arcs))
    else:
        bad = in_tree_violations(d, InTree(b.root, b.arcs))
    covered = {b.root}
    for u, v in b.arcs:
        covered.add(u)
        covered.add(v)
    if len(covered) != d.n:
        bad.append("not spanning")
    return bad


def check_branching(b: Branching) -> Branching:
    bad = branching_violations(b)
    if bad:
        raise ContractViolation("invalid branching: " + "; ".join(bad))
    return b


# -- optimum branchings ------------------------------------------------------


def _weight_vector(d: Digraph, w: Weights) -> list[int | Fraction]:
    if callable(w):
        vec = [w(a) for a in d.arcs]
    elif isinstance(w, Mapping):
        vec = [w[a] for a in d.arcs]
    else:
        vec = list(w)
        if len(vec) != d.m:
            raise ValueError(f"expected {d.m} weights, got {len(vec)}")
    for x in vec:
        if not isinstance(x, (int, Fraction)):
            raise TypeError(f"weights must be int or Fraction, got {type(x).__name__}")
    return vec


def _optimum_arc_ids(
    d: Digraph, vec: list[int | Fraction], root: int
) -> tuple[int | Fraction, list[int]] | None:
    """Exact max-weight spanning out-branching; (total, arc ids) or None."""
    if not (0 <= root < d.n):
        raise ValueError(f"root {root} out of range")
    if d.n == 0:
        return None
    scale = math.lcm(*(x.denominator for x in vec)) if vec else 1
    scaled = [int(x * scale) for x in vec]
    tails = [u for u, _ in d.arcs]
    heads = [v for _, v in d.arcs]
    kern = _kernels.edmonds
    if _kernels.BACKEND == "c":
        worst = max((abs(x) for x in scaled), default=0) * (d.n + 1)
        if worst >= _INT64_SAFE:
            kern = _pykernels.edmonds
    try:
        res = kern(d.n, tails, heads, scaled, root)
    except OverflowError:
        # the compiled kernel bails out when contracted weights leave the
        # int64 window; the pure twin computes in exact bigints
        res = _pykernels.edmonds(d.n, tails, heads, scaled, root)
    if res is None:
        return None
    _, chosen = res
    total = sum(vec[i] for i in chosen)
    return total, chosen


def max_weight_out_branching(d: Digraph, w: Weights, root: int) -> Branching | None:
    """Maximum-total-weight spanning out-branching rooted at ``root``.

    None exactly when no spanning out-branching rooted there exists.  Ties
    fall to the deterministic arc order of the contraction algorithm.
    """
    res = _optimum_arc_ids(d, _weight_vector(d, w), root)
    if res is None:
        return None
    _, chosen = res
    return Branching(d, root, "out", frozenset(d.arcs[i] for i in chosen))


def max_weight_in_branching(d: Digraph, w: Weights, root: int) -> Branching | None:
    """In-branching twin of :func:`max_weight_out_branching`."""
    vec = _weight_vector(d, w)
    rev = d.reverse()
    wmap = {a: x for a, x in zip(d.arcs, vec)}
    rev_vec = [wmap[(v, u)] for u, v in rev.arcs]
    res = _optimum_arc_ids(rev, rev_vec, root)
    if res is None:
        return None
    _, chosen = res
    return Branching(d, root, "in", frozenset((v, u) for u, v in
                                              (rev.arcs[i] for i in chosen)))


def _forced_optimum(
    d: Digraph, root: int, a: Arc, orientation: str
) -> tuple[int | Fraction, Branching] | None:
    """Optimum under the 2/1 weighting that rewards using arc ``a``."""
    weights = [2 if arc == a else 1 for arc in d.arcs]
    if orientation == "out":
        b = max_weight_out_branching(d, weights, root)
    else:
        b = max_weight_in_branching(d, weights, root)
    if b is None:
        return None
    total = sum(2 if arc == a else 1 for arc in b.arcs)
    return total, b


def arc_in_some_branching(
    d: Digraph, root: int, a: Arc, orientation: str = "out"
) -> bool:
    """True iff some rooted branching of the given orientation uses ``a``.

    Decided exactly: give ``a`` weight 2 and everything else 1; the optimum
    hits n iff ``a`` is usable.
    """
    ok, _ = arc_in_some_branching_witness(d, root, a, orientation)
    return ok


def arc_in_some_branching_witness(
    d: Digraph, root: int, a: Arc, orientation: str = "out"
) -> tuple[bool, Branching | None]:
    """Like :func:`arc_in_some_branching` but also hands back the witness."""
    if orientation not in ("out", "in"):
        raise ValueError(f"unknown orientation {orientation!r}")
    if tuple(a) not in d.arc_positions:
        raise ContractViolation(f"{a} is not an arc of the digraph")
    res = _forced_optimum(d, root, tuple(a), orientation)
    if res is None:
        raise ContractViolation(f"no {orientation}-branching rooted at {root} exists")
    total, b = res
    if total == d.n:
        return True, b
    return False, None


# -- extension ---------------------------------------------------------------


def extend_out_tree(d: Digraph, t: OutTree) -> Branching:
    """Grow an out-tree into a spanning out-branching, never losing leaves.

    New vertices hang off an internal vertex whenever possible (one more
    leaf); only otherwise off a leaf (leaf count unchanged).  Hence the
    result has at least as many leaves as the input tree.
    """
    bad = out_tree_violations(d, t)
    if bad:
        raise ContractViolation("extend_out_tree input: " + "; ".join(bad))
    arcs = set(t.arcs)
    covered = set(t.vertices)
    has_kids = {u for u, _ in arcs}
    while len(covered) < d.n:
        fallback = None
        pick = None
        for u in sorted(covered):
            for v in d.out_adj[u]:
                if v in covered:
                    continue
                if u in has_kids:
                    pick = (u, v)
                    break
                if fallback is None:
                    fallback = (u, v)
            if pick:
                break
        pick = pick or fallback
        if pick is None:
            raise ContractViolation(
                f"no spanning out-branching rooted at {t.root} exists"
            )
        arcs.add(pick)
        covered.add(pick[1])
        has_kids.add(pick[0])
    return Branching(d, t.root, "out", frozenset(arcs))


def extend_in_tree(d: Digraph, t: InTree) -> Branching:
    """In-branching twin of :func:`extend_out_tree`."""
    bad = in_tree_violations(d, t)
    if bad:
        raise ContractViolation("extend_in_tree input: " + "; ".join(bad))
    rev = d.reverse()
    flipped = OutTree(t.root, frozenset((v, u) for u, v in t.arcs))
    b = extend_out_tree(rev, flipped)
    return Branching(d, t.root, "in", frozenset((v, u) for u, v in b.arcs))


# -- distinctness -------------------------------------------------------------


def distinctness(t_plus: Branching, t_minus: Branching) -> int:
    """|A(T+) \\ A(T-)|; symmetric because both sides have n-1 arcs."""
    if t_plus.host != t_minus.host:
        raise ContractViolation("branchings live on different digraphs")
    if t_plus.orientation != "out" or t_minus.orientation != "in":
        raise ContractViolation("expected an (out, in) branching pair")
    return len(t_plus.arcs - t_minus.arcs)


def min_overlap_in_branching(d: Digraph, t_plus: Branching, t: int) -> Branching:
    """The in-branching at t sharing as few arcs as possible with t_plus.

    Weight 0 on arcs of t_plus and 1 elsewhere; a maximum-weight
    in-branching then minimizes the overlap, and
    distinctness = (n-1) - overlap is the best achievable against t_plus.
    """
    if t_plus.host != d:
        raise ContractViolation("t_plus lives on a different digraph")
    weights = [0 if a in t_plus.arcs else 1 for a in d.arcs]
    b = max_weight_in_branching(d, weights, t)
    if b is None:
        raise ContractViolation(f"no in-branching rooted at {t} exists")
    return b


# -- max-leaf search -----------------------------------------------------------


def max_leaf_out_branching(d: Digraph, root: int, k: int) -> Branching | None:
    """A spanning out-branching rooted at ``root`` with >= k leaves, or None.

    Exhaustive rooted-tree search: repeatedly branch on the lowest-id open
    vertex, either attaching one of its unused out-neighbours or closing
    it.  A partial tree already showing k childless vertices wins because
    extension never loses leaves; a state whose childless count plus
    uncovered count falls below k is dead.  Exponential in the worst case
    by design -- decisions here are correctness-critical, not hot.
    """
    if not has_rooted_out_branching(d, root):
        raise ContractViolation(f"no out-branching rooted at {root} exists")
    if k <= 1:
        return extend_out_tree(d, OutTree(root, frozenset()))

    out_adj = d.out_adj
    n = d.n
    covered = {root}
    arcs: list[Arc] = []
    kids = [0] * n
    open_set = {root}

    def childless() -> int:
        return sum(1 for v in covered if kids[v] == 0)

    def search() -> bool:
        free = childless()
        if free >= k:
            return True
        if free + (n - len(covered)) < k:
            return False
        if not open_set:
            return False
        v = min(open_set)
        for w in out_adj[v]:
            if w in covered:
                continue
            covered.add(w)
            open_set.add(w)
            arcs.append((v, w))
            kids[v] += 1
            if search():
                return True
            kids[v] -= 1
            arcs.pop()
            open_set.discard(w)
            covered.discard(w)
        open_set.discard(v)
        if search():
            return True
        open_set.add(v)
        return False

    if not search():
        return None
    return extend_out_tree(d, OutTree(root, frozenset(arcs)))
