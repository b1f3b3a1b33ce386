"""End-to-end solver for rooted k-distinct branchings.

Pipeline: reduce the instance, add the flagged return arc t->s, then loop
{rule 1, threshold certifiers, rule 2} over the maximal degenerate paths of
the s-rooted cut decomposition, rebuilding after every change.  Afterwards
try the non-degenerate-chain builder, then the bounded-height max-leaf
route, and finally the capped exact oracle.  Every YES ships a certificate
that is lifted back through all transformations and re-verified on the
original digraph; an oracle-cap overflow yields an explicit undecided
outcome.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

from .branchings import (
    Branching,
    InTree,
    OutTree,
    arc_in_some_branching_witness,
    branching_violations,
    count_leaves,
    distinctness,
    extend_in_tree,
    extend_out_tree,
    in_tree_violations,
    max_leaf_out_branching,
    max_weight_in_branching,
    max_weight_out_branching,
    min_overlap_in_branching,
    out_tree_violations,
)
from .decomposition import (
    CutDecomposition,
    DegeneratePath,
    _route_avoiding,
    build_cut_decomposition,
    degenerate_paths,
    forbidden_back_arcs,
    longest_monotone_path,
)
from .digraph import (
    ContractViolation,
    Digraph,
    has_rooted_in_branching,
    has_rooted_out_branching,
    scc_condensation,
)
from .exhaustive import enumerate_out_branchings
from .flow import bfs_path, two_disjoint_paths

Arc = tuple[int, int]

DEFAULT_ORACLE_CAP = 12
_CAP_ENV = "ARBOR_ORACLE_CAP"


class _Reject:
    """Sentinel: the instance lacks a rooted out- or in-branching."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "REJECT"


REJECT = _Reject()


class OracleCapExceeded(RuntimeError):
    """The exact enumeration oracle refused an instance above its size cap."""


def oracle_cap() -> int:
    raw = os.environ.get(_CAP_ENV)
    return int(raw) if raw else DEFAULT_ORACLE_CAP


@dataclass(frozen=True, slots=True)
class Instance:
    """A working instance: digraph, terminals, target, reduction artifacts.

    When ``reduced`` holds, both rooted branchings exist and every non-aux
    arc sits in some rooted branching, hence r_s and r_t are disjoint.
    ``aux_arc`` is the flagged return arc (t, s) when present; it is exempt
    from reduction and invisible to arc classification.
    """

    d: Digraph
    s: int
    t: int
    k: int = 0
    reduced: bool = False
    r_s: frozenset[Arc] = frozenset()
    r_t: frozenset[Arc] = frozenset()
    aux_arc: Arc | None = None

    @property
    def ts_added(self) -> bool:
        return self.aux_arc is not None


@dataclass(frozen=True, slots=True)
class Certificate:
    """A verified witness: out-branching at s, in-branching at t, their gap."""

    k: int
    t_plus: Branching
    t_minus: Branching
    distinctness: int

    def to_json(self) -> str:
        obj = {
            "k": self.k,
            "s": self.t_plus.root,
            "t": self.t_minus.root,
            "out_arcs": sorted([list(a) for a in self.t_plus.arcs]),
            "in_arcs": sorted([list(a) for a in self.t_minus.arcs]),
            "distinctness": self.distinctness,
        }
        return json.dumps(obj, indent=2, sort_keys=True)

    @staticmethod
    def from_json(text: str, host: Digraph) -> "Certificate":
        obj = json.loads(text)
        return Certificate(
            obj["k"],
            Branching(host, obj["s"], "out",
                      frozenset(tuple(a) for a in obj["out_arcs"])),
            Branching(host, obj["t"], "in",
                      frozenset(tuple(a) for a in obj["in_arcs"])),
            obj["distinctness"],
        )


@dataclass(frozen=True, slots=True)
class PathArcClassification:
    """Arcs incident to one degenerate path, split by direction.

    a_plus: tails on the path, heads in diblocks strictly above its first
    node.  a_zero: both ends on the path, pointing backwards.  a_minus:
    heads on the path, tails homed at or below its last node.  x_tails and
    y_tails list the a_plus / a_zero tails in path order, x_heads the
    sorted distinct a_plus heads.
    """

    path: DegeneratePath
    a_plus: frozenset[Arc]
    a_zero: frozenset[Arc]
    a_minus: frozenset[Arc]
    x_tails: tuple[int, ...]
    y_tails: tuple[int, ...]
    x_heads: tuple[int, ...]


@dataclass(frozen=True, slots=True)
class SolveResult:
    """Outcome of solve(): answer True/False/None (undecided), plus evidence."""

    answer: bool | None
    certificate: Certificate | None
    trace: tuple[str, ...]
    branch: str


# -- preprocessing -----------------------------------------------------------


def _branching_arc_sets(d: Digraph, s: int, t: int, skip: Arc | None):
    """Which arcs sit in some rooted out-branching / in-branching."""
    in_out: set[Arc] = set()
    in_in: set[Arc] = set()
    for a in d.arcs:
        if a == skip:
            continue
        if arc_in_some_branching_witness(d, s, a, "out")[0]:
            in_out.add(a)
        if arc_in_some_branching_witness(d, t, a, "in")[0]:
            in_in.add(a)
    return in_out, in_in


def reduce_instance(
    d: Digraph, s: int, t: int, k: int = 0, aux_arc: Arc | None = None
) -> Instance | _Reject:
    """Reject, or strip useless arcs until every arc serves some branching.

    An arc in no rooted out-branching and no rooted in-branching can never
    matter; removal batches repeat until a fixpoint.  The flagged aux arc
    is kept regardless.  The final sweep doubles as the r_s / r_t
    computation.
    """
    if not (0 <= s < d.n and 0 <= t < d.n):
        raise ValueError(f"terminals {s}, {t} out of range")
    if not (has_rooted_out_branching(d, s) and has_rooted_in_branching(d, t)):
        return REJECT
    work = d
    while True:
        in_out, in_in = _branching_arc_sets(work, s, t, aux_arc)
        doomed = [
            a for a in work.arcs
            if a != aux_arc and a not in in_out and a not in in_in
        ]
        if not doomed:
            r_s = frozenset(a for a in work.arcs
                            if a != aux_arc and a not in in_out)
            r_t = frozenset(a for a in work.arcs
                            if a != aux_arc and a not in in_in)
            if r_s & r_t:
                raise ContractViolation(
                    f"arcs {sorted(r_s & r_t)} serve no branching of either "
                    "kind after reduction"
                )
            return Instance(work, s, t, k, True, r_s, r_t, aux_arc)
        work = work.with_arcs(drop=doomed)


def compute_Rs_Rt(
    inst: Instance, dec: CutDecomposition | None = None
) -> tuple[frozenset[Arc], frozenset[Arc]]:
    """(r_s, r_t) for a reduced instance, cross-checked against back arcs.

    Every forbidden back arc of the decomposition must already lie in r_s;
    a miss means the instance is not actually reduced.
    """
    if not inst.reduced:
        raise ContractViolation("compute_Rs_Rt needs a reduced instance")
    in_out, in_in = _branching_arc_sets(inst.d, inst.s, inst.t, inst.aux_arc)
    r_s = frozenset(a for a in inst.d.arcs
                    if a != inst.aux_arc and a not in in_out)
    r_t = frozenset(a for a in inst.d.arcs
                    if a != inst.aux_arc and a not in in_in)
    if r_s & r_t:
        raise ContractViolation(f"r_s and r_t overlap: {sorted(r_s & r_t)}")
    if dec is not None:
        back = forbidden_back_arcs(dec)
        if inst.aux_arc is not None:
            back -= {inst.aux_arc}
        stray = back - r_s
        if stray:
            raise ContractViolation(f"back arcs {sorted(stray)} missing from r_s")
    return r_s, r_t


# -- degenerate-path arc classification --------------------------------------


def classify_path_arcs(
    inst: Instance, dec: CutDecomposition, path: DegeneratePath
) -> PathArcClassification:
    """Split the arcs incident to a degenerate path into up/back/below.

    Structural arcs (the path arcs themselves, the continuation arc out of
    the last node, entries into the first node from its parent's subtree
    region, and the flagged aux arc) are skipped.  Anything else that fails
    to classify breaks the completeness contract of reduced instances.
    """
    d = inst.d
    chain = path.nodes
    pos = {x: i for i, x in enumerate(chain)}
    cont = path.realization[-1]
    first, last = chain[0], chain[-1]
    parent = dec.parent.get(first)
    sub_first = dec.subtree_vertices(first)
    parent_region = (
        dec.subtree_vertices(parent) - sub_first
        if parent is not None
        else frozenset()
    )

    def hosts(v: int) -> set[int]:
        hs = {dec.home[v]}
        if dec.is_node(v):
            hs.add(v)
        return hs

    a_plus: set[Arc] = set()
    a_zero: set[Arc] = set()
    a_minus: set[Arc] = set()
    for u, v in d.arcs:
        if (u, v) == inst.aux_arc:
            continue
        tail_on = u in pos
        head_on = v in pos
        if not tail_on and not head_on:
            continue
        if tail_on and head_on:
            if pos[v] == pos[u] + 1:
                continue  # a path arc
            if pos[v] < pos[u]:
                a_zero.add((u, v))
                continue
            raise ContractViolation(
                f"forward jump ({u}, {v}) along a degenerate path"
            )
        if tail_on:
            if u == last and v == cont:
                continue  # continuation into the child diblock
            if any(y != first and dec.is_ancestor(y, first) for y in hosts(v)):
                a_plus.add((u, v))
                continue
            raise ContractViolation(
                f"unclassifiable arc ({u}, {v}) leaving a degenerate path"
            )
        # head on the path, tail off it
        if v == first and u in parent_region:
            continue  # entry arc from the parent's region
        if any(dec.is_ancestor(last, y) for y in hosts(u)):
            a_minus.add((u, v))
            continue
        raise ContractViolation(
            f"unclassifiable arc ({u}, {v}) entering a degenerate path"
        )

    stray = (a_zero | a_minus) - inst.r_s
    if stray:
        raise ContractViolation(
            f"on-path/below arcs {sorted(stray)} usable in an out-branching"
        )
    return PathArcClassification(
        path,
        frozenset(a_plus),
        frozenset(a_zero),
        frozenset(a_minus),
        tuple(sorted({u for u, _ in a_plus}, key=pos.__getitem__)),
        tuple(sorted({u for u, _ in a_zero}, key=pos.__getitem__)),
        tuple(sorted({v for _, v in a_plus})),
    )


# -- reduction rules ----------------------------------------------------------


def apply_rule1(
    inst: Instance, dec: CutDecomposition, path: DegeneratePath
) -> tuple[Instance, tuple[Arc, ...]]:
    """Drop redundant upward arcs unusable by in-branchings.

    Two such arcs sharing a head are interchangeable in any out-branching,
    so only the one leaving the path earliest survives.  Returns the
    (re-reduced) instance and the removed arcs.
    """
    cls = classify_path_arcs(inst, dec, path)
    pos = {x: i for i, x in enumerate(path.nodes)}
    by_head: dict[int, list[Arc]] = {}
    for a in sorted(cls.a_plus & inst.r_t):
        by_head.setdefault(a[1], []).append(a)
    doomed: list[Arc] = []
    for head in sorted(by_head):
        arcs = sorted(by_head[head], key=lambda a: pos[a[0]])
        doomed.extend(arcs[1:])
    if not doomed:
        return inst, ()
    smaller = inst.d.with_arcs(drop=doomed)
    redone = reduce_instance(smaller, inst.s, inst.t, inst.k, inst.aux_arc)
    if redone is REJECT:
        raise ContractViolation("rule 1 removed a load-bearing arc")
    return redone, tuple(doomed)


@dataclass(frozen=True, slots=True)
class PathContraction:
    """Record of one rule-2 contraction, enough to lift certificates back.

    ``segment`` lists the contracted path nodes in order (old ids); they
    collapse onto ``segment[0]`` and surviving vertices are renumbered
    densely.  ``exit_head`` is the old head of the segment's unique
    outgoing arc.  Every out-branching enters the segment at its first
    vertex and every in-branching leaves through the exit arc, so lifted
    certificates stay branchings once the segment's own arcs come back.
    """

    host_before: Digraph
    s_before: int
    t_before: int
    aux_before: Arc | None
    fwd: tuple[int, ...]  # old id -> new id
    back: tuple[int, ...]  # new id -> old id (merged vertex -> segment[0])
    z: int  # new id of the merged vertex
    segment: tuple[int, ...]
    exit_head: int

    @property
    def chain_arcs(self) -> tuple[Arc, ...]:
        return tuple(zip(self.segment, self.segment[1:]))

    def _lift_exit(self, b: int) -> Arc:
        old = self.back[b]
        if (self.segment[-1], old) != (self.segment[-1], self.exit_head):
            raise ContractViolation(
                f"merged vertex exits to {old}, expected {self.exit_head}"
            )
        return (self.segment[-1], self.exit_head)

    def lift_out_arcs(self, arcs: Iterable[Arc]) -> frozenset[Arc]:
        out: set[Arc] = set(self.chain_arcs)
        entry = self.segment[0]
        for a, b in arcs:
            if b == self.z:
                old = (self.back[a], entry)
                if old not in self.host_before.arc_positions:
                    raise ContractViolation(
                        f"no original arc {old} behind a merged-vertex entry"
                    )
                out.add(old)
            elif a == self.z:
                out.add(self._lift_exit(b))
            else:
                out.add((self.back[a], self.back[b]))
        if len(out) != self.host_before.n - 1:
            raise ContractViolation("lifted out-branching has a bad arc count")
        return frozenset(out)

    def lift_in_arcs(self, arcs: Iterable[Arc]) -> frozenset[Arc]:
        out: set[Arc] = set(self.chain_arcs)
        for a, b in arcs:
            if b == self.z:
                tail = self.back[a]
                target = next(
                    (v for v in self.segment
                     if (tail, v) in self.host_before.arc_positions),
                    None,
                )
                if target is None:
                    raise ContractViolation(
                        f"no original arc from {tail} into the merged segment"
                    )
                out.add((tail, target))
            elif a == self.z:
                out.add(self._lift_exit(b))
            else:
                out.add((self.back[a], self.back[b]))
        if len(out) != self.host_before.n - 1:
            raise ContractViolation("lifted in-branching has a bad arc count")
        return frozenset(out)


def _contract_segment(
    inst: Instance, segment: Sequence[int]
) -> tuple[Instance, PathContraction]:
    d = inst.d
    seg = tuple(segment)
    seg_set = set(seg)
    keep = [v for v in range(d.n) if v not in seg_set or v == seg[0]]
    fwd = [-1] * d.n
    for new, old in enumerate(keep):
        fwd[old] = new
    for v in seg:
        fwd[v] = fwd[seg[0]]
    exit_head = None
    new_arcs: set[Arc] = set()
    for u, v in d.arcs:
        a, b = fwd[u], fwd[v]
        if a == b:
            continue
        if u in seg_set and v not in seg_set:
            if exit_head is not None and exit_head != v:
                raise ContractViolation(
                    f"segment {seg} has outgoing arcs to {exit_head} and {v}"
                )
            exit_head = v
        new_arcs.add((a, b))
    if exit_head is None:
        raise ContractViolation(f"segment {seg} has no outgoing arc")
    rec = PathContraction(
        host_before=d,
        s_before=inst.s,
        t_before=inst.t,
        aux_before=inst.aux_arc,
        fwd=tuple(fwd),
        back=tuple(keep),
        z=fwd[seg[0]],
        segment=seg,
        exit_head=exit_head,
    )
    new_aux = None
    if inst.aux_arc is not None:
        new_aux = (fwd[inst.aux_arc[0]], fwd[inst.aux_arc[1]])
    redone = reduce_instance(
        Digraph(len(keep), new_arcs), fwd[inst.s], fwd[inst.t], inst.k, new_aux
    )
    if redone is REJECT:
        raise ContractViolation("contraction destroyed a rooted branching")
    return redone, rec


def rule2_segments(
    inst: Instance, cls: PathArcClassification
) -> list[tuple[int, ...]]:
    """Maximal contractible stretches of the path: at least two nodes, no
    outgoing classified arc, and not containing t (t has no out-arc in
    in-branchings, which the contraction argument relies on)."""
    interesting = set(cls.x_tails) | set(cls.y_tails) | {inst.t}
    runs: list[tuple[int, ...]] = []
    cur: list[int] = []
    for x in cls.path.nodes:
        if x in interesting:
            if len(cur) >= 2:
                runs.append(tuple(cur))
            cur = []
        else:
            cur.append(x)
    if len(cur) >= 2:
        runs.append(tuple(cur))
    return runs


def apply_rule2(
    inst: Instance, dec: CutDecomposition, path: DegeneratePath
) -> tuple[Instance, PathContraction | None]:
    """Contract the first maximal boring stretch of the path, if any."""
    cls = classify_path_arcs(inst, dec, path)
    runs = rule2_segments(inst, cls)
    if not runs:
        return inst, None
    return _contract_segment(inst, runs[0])


# -- certificate plumbing -----------------------------------------------------


@dataclass(frozen=True, slots=True)
class _HostLift:
    """Arc-preserving step: a reduction, or the aux-arc introduction."""

    host_before: Digraph
    s_before: int
    t_before: int
    forbidden: Arc | None = None  # the aux arc being stripped, if any

    def lift_out_arcs(self, arcs: Iterable[Arc]) -> frozenset[Arc]:
        return self._check(arcs)

    def lift_in_arcs(self, arcs: Iterable[Arc]) -> frozenset[Arc]:
        return self._check(arcs)

    def _check(self, arcs: Iterable[Arc]) -> frozenset[Arc]:
        out = frozenset(arcs)
        if self.forbidden is not None and self.forbidden in out:
            raise ContractViolation(
                f"certificate uses the auxiliary arc {self.forbidden}"
            )
        for a in out:
            if a not in self.host_before.arc_positions:
                raise ContractViolation(f"lifted arc {a} missing from host")
        return out


def _lift_certificate(cert: Certificate, lifts: Sequence) -> Certificate:
    """Replay all transformations backwards, ending on the original host."""
    t_plus, t_minus = cert.t_plus, cert.t_minus
    for lift in reversed(lifts):
        t_plus = Branching(lift.host_before, lift.s_before, "out",
                           lift.lift_out_arcs(t_plus.arcs))
        t_minus = Branching(lift.host_before, lift.t_before, "in",
                            lift.lift_in_arcs(t_minus.arcs))
    return Certificate(cert.k, t_plus, t_minus, distinctness(t_plus, t_minus))


def verify_certificate(
    d: Digraph, s: int, t: int, k: int, cert: Certificate
) -> bool:
    """Full audit of a certificate against the original digraph."""
    tp, tm = cert.t_plus, cert.t_minus
    if tp.host != d or tm.host != d:
        return False
    if tp.root != s or tm.root != t:
        return False
    if tp.orientation != "out" or tm.orientation != "in":
        return False
    if branching_violations(tp) or branching_violations(tm):
        return False
    if s != t and ((t, s) in tp.arcs or (t, s) in tm.arcs):
        return False
    actual = len(tp.arcs - tm.arcs)
    return actual == cert.distinctness and actual >= k


# -- constructive certifiers ---------------------------------------------------


def _any_out_branching(d: Digraph, s: int) -> Branching:
    b = max_weight_out_branching(d, [1] * d.m, s)
    if b is None:
        raise ContractViolation(f"no out-branching rooted at {s}")
    return b


def _any_in_branching(d: Digraph, t: int) -> Branching:
    b = max_weight_in_branching(d, [1] * d.m, t)
    if b is None:
        raise ContractViolation(f"no in-branching rooted at {t}")
    return b


def _certify_leafy_out(inst: Instance, tree: OutTree) -> Certificate:
    """Out-tree with k+1 leaves -> certificate: extend it, take any
    in-branching; the leaves' tree arcs are pairwise unusable by it."""
    bad = out_tree_violations(inst.d, tree)
    if bad:
        raise ContractViolation("certifier built a broken out-tree: "
                                + "; ".join(bad))
    if count_leaves(tree) < inst.k + 1:
        raise ContractViolation(
            f"certifier tree has {count_leaves(tree)} leaves, needs {inst.k + 1}"
        )
    t_plus = extend_out_tree(inst.d, tree)
    t_minus = _any_in_branching(inst.d, inst.t)
    dist = distinctness(t_plus, t_minus)
    if dist < inst.k:
        raise ContractViolation(
            f"leafy out-tree certificate reached only {dist} < k={inst.k}"
        )
    return Certificate(inst.k, t_plus, t_minus, dist)


def _certify_leafy_in(inst: Instance, tree: InTree) -> Certificate:
    """In-tree twin of :func:`_certify_leafy_out`."""
    bad = in_tree_violations(inst.d, tree)
    if bad:
        raise ContractViolation("certifier built a broken in-tree: "
                                + "; ".join(bad))
    if count_leaves(tree) < inst.k + 1:
        raise ContractViolation(
            f"certifier tree has {count_leaves(tree)} leaves, needs {inst.k + 1}"
        )
    t_minus = extend_in_tree(inst.d, tree)
    t_plus = _any_out_branching(inst.d, inst.s)
    dist = distinctness(t_plus, t_minus)
    if dist < inst.k:
        raise ContractViolation(
            f"leafy in-tree certificate reached only {dist} < k={inst.k}"
        )
    return Certificate(inst.k, t_plus, t_minus, dist)


def _certify_upward_surplus(
    inst: Instance, dec: CutDecomposition, cls: PathArcClassification
) -> Certificate | None:
    """YES when >= 2k+2 upward arcs are unusable by in-branchings.

    Their heads are distinct vertices off the root-to-path spine once rule
    1 is exhausted; a root-to-path-end route missing at least half of them
    turns each missed head into a fresh leaf via its on-path tail.
    """
    useless = sorted(cls.a_plus & inst.r_t)
    heads = [v for _, v in useless]
    if len(set(heads)) != len(heads):
        raise ContractViolation(
            f"duplicate upward-arc heads survived rule 1: {useless}"
        )
    if len(heads) < 2 * inst.k + 2:
        return None
    # Heads may include tree nodes hanging off sibling branches, which the
    # public router rejects; the internal one only needs them off the spine.
    spine = _route_avoiding(dec, cls.path.nodes[-1], frozenset(heads))
    on_spine = set(spine)
    missing = [x for x in cls.path.nodes if x not in on_spine]
    if missing:
        raise ContractViolation(f"path nodes {missing} missing from the spine")
    arcs = set(zip(spine, spine[1:]))
    added = 0
    for u, v in useless:
        if v not in on_spine:
            arcs.add((u, v))
            added += 1
    if added < inst.k + 1:
        raise ContractViolation(
            f"route kept only {added} of {len(heads)} heads free"
        )
    return _certify_leafy_out(inst, OutTree(inst.s, frozenset(arcs)))


def _in_branching_walk(branching: Branching, start: int) -> tuple[int, ...]:
    """Follow the unique out-arcs of an in-branching from start to its root."""
    nxt = {u: v for u, v in branching.arcs}
    walk = [start]
    while walk[-1] != branching.root:
        walk.append(nxt[walk[-1]])
    return tuple(walk)


def _pack_upward_arcs(
    inst: Instance, cls: PathArcClassification
) -> tuple[Branching, list[Arc]]:
    """One in-branching carrying upward arcs out of as many tails as possible.

    Unit weight per candidate arc makes the optimum total count covered
    tails exactly, since a vertex spends its single out-arc on at most one
    of them.  Merging per-tail witness paths instead can silently trade
    leaves away when a witness wanders across another tail, so the packing
    is computed globally.
    """
    candidates = cls.a_plus - inst.r_t
    t_minus = max_weight_in_branching(
        inst.d, lambda a: 1 if a in candidates else 0, inst.t
    )
    if t_minus is None:
        raise ContractViolation("reduced instance lost its in-branching")
    packed = sorted(a for a in t_minus.arcs if a in candidates)
    return t_minus, packed


def build_A_plus_in_tree(
    inst: Instance, dec: CutDecomposition, cls: PathArcClassification
) -> InTree:
    """In-tree with a leaf per tail whose upward arc the packing carries.

    The tree is the union of the packed tails' walks to t inside one
    optimum in-branching.  A walk leaves its own subtree for good after
    its first arc, so a packed tail loses leaf status only to the single
    walk-through descent the chain admits; at most one leaf is forfeit.
    Requires t off the path and rule 1 exhausted.
    """
    d = inst.d
    if inst.t in cls.path.nodes:
        raise ContractViolation("t lies on the degenerate path")
    t_minus, packed = _pack_upward_arcs(inst, cls)
    if not packed:
        return InTree(inst.t, frozenset())

    tree_arcs: set[Arc] = set()
    for arc in packed:
        walk = _in_branching_walk(t_minus, arc[0])
        blocked = dec.subtree_vertices(arc[0]) - {arc[0]}
        hit = next((w for w in walk[1:] if w in blocked), None)
        if hit is not None:
            raise ContractViolation(
                f"walk from {arc[0]} re-enters its subtree at {hit}"
            )
        tree_arcs.update(zip(walk, walk[1:]))

    tree = InTree(inst.t, frozenset(tree_arcs))
    bad = in_tree_violations(d, tree)
    if bad:
        raise ContractViolation("upward-tail in-tree invalid: " + "; ".join(bad))
    tails = {a[0] for a in packed}
    leaves = set(tree.leaves())
    if not leaves <= tails:
        raise ContractViolation(
            f"stray leaves {sorted(leaves - tails)} beside the packed tails"
        )
    if len(leaves) < len(tails) - 1:
        raise ContractViolation(
            f"{len(tails)} packed tails left only {len(leaves)} leaves"
        )
    return tree


def _certify_packed_upward(
    inst: Instance, cls: PathArcClassification
) -> Certificate | None:
    """YES when one in-branching carries upward arcs out of k+1 tails.

    Interior chain nodes admit exactly one in-arc an out-branching may
    use — their chain arc — so every out-branching walks the whole chain,
    while each packed tail below the last node withholds its chain arc
    from the in-branching.  That pins k distinct arcs even when a
    run-over tail spoils the leaf count of the packed in-tree.
    """
    t_minus, packed = _pack_upward_arcs(inst, cls)
    if len({a[0] for a in packed}) < inst.k + 1:
        return None
    t_plus = _any_out_branching(inst.d, inst.s)
    dist = distinctness(t_plus, t_minus)
    if dist < inst.k:
        raise ContractViolation(
            f"packed in-branching reached only {dist} < k={inst.k}"
        )
    return Certificate(inst.k, t_plus, t_minus, dist)


def build_A_zero_in_tree(
    inst: Instance, dec: CutDecomposition, cls: PathArcClassification
) -> InTree:
    """In-tree containing, per on-path back-arc tail, its shortest back arc.

    Seeded by a witness path through the topmost tail's arc, grown by
    hanging every upward-arc head via a path to t, then repeatedly merging
    the deepest-rooted leftover piece into the rest by walking down the
    path.  The collected back arcs are unusable by out-branchings, which
    is what makes the result a distinctness witness.
    """
    d = inst.d
    if inst.t in cls.path.nodes:
        raise ContractViolation("t lies on the degenerate path")
    if not cls.y_tails:
        return InTree(inst.t, frozenset())
    chain = cls.path.nodes
    pos = {x: i for i, x in enumerate(chain)}
    y_set = set(cls.y_tails)
    x_tail_set = set(cls.x_tails)

    heads_of = {v: [b for a, b in cls.a_zero if a == v] for v in cls.y_tails}
    chosen = {v: (v, max(heads_of[v], key=pos.__getitem__))
              for v in cls.y_tails}

    u = cls.y_tails[0]
    ok, witness = arc_in_some_branching_witness(d, inst.t, chosen[u], "in")
    if not ok:
        raise ContractViolation(f"back arc {chosen[u]} unusable by in-branchings")
    seed_walk = _in_branching_walk(witness, u)
    bad_hit = next((w for w in seed_walk[1:] if w in y_set), None)
    if bad_hit is not None:
        raise ContractViolation(
            f"seed path touches a deeper back-arc tail {bad_hit}"
        )

    main = 0
    comp_arcs: dict[int, set[Arc]] = {main: set(zip(seed_walk, seed_walk[1:]))}
    comp_verts: dict[int, set[int]] = {main: set(seed_walk)}
    owner: dict[int, int] = {w: main for w in seed_walk}

    def absorb(c: int, vertex: int) -> None:
        comp_verts[c].add(vertex)
        owner[vertex] = c

    # leftover back arcs with heads already on the seed path hang off it
    for v in cls.y_tails[1:]:
        if chosen[v][1] in comp_verts[main] and v not in owner:
            comp_arcs[main].add(chosen[v])
            absorb(main, v)

    for head in cls.x_heads:
        if head in owner:
            continue
        walk = bfs_path(d, head, inst.t)
        if walk is None:
            raise ContractViolation(f"upward head {head} cannot reach {inst.t}")
        stop = next(i for i, w in enumerate(walk) if w in comp_verts[main])
        prefix = walk[: stop + 1]
        stray = [w for w in prefix[:-1] if w in y_set]
        if stray:
            raise ContractViolation(
                f"attachment path for {head} passes back-arc tails {stray}"
            )
        comp_arcs[main].update(zip(prefix, prefix[1:]))
        for w in prefix[:-1]:
            absorb(main, w)

    next_cid = 1
    for v in cls.y_tails:
        arc = chosen[v]
        if arc in comp_arcs[main]:
            continue
        cv, ch = owner.get(v), owner.get(arc[1])
        if cv is not None and cv == ch:
            raise ContractViolation(f"back arc {arc} closes a cycle")
        if cv is None and ch is None:
            target = next_cid
            next_cid += 1
            comp_arcs[target] = set()
            comp_verts[target] = set()
        elif cv is None or ch is None:
            target = cv if cv is not None else ch
        else:
            target, other = min(cv, ch), max(cv, ch)
            comp_arcs[target] |= comp_arcs.pop(other)
            for w in comp_verts.pop(other):
                absorb(target, w)
        comp_arcs[target].add(arc)
        for w in arc:
            absorb(target, w)

    def component_root(c: int) -> int:
        if c == main:
            return inst.t
        heads = {b for _, b in comp_arcs[c]}
        tails = {a for a, _ in comp_arcs[c]}
        roots = sorted(heads - tails)
        if len(roots) != 1:
            raise ContractViolation(f"piece has roots {roots}, expected one")
        root = roots[0]
        if pos[root] != min(pos[w] for w in comp_verts[c]):
            raise ContractViolation(f"piece root {root} is not its topmost vertex")
        return root

    def merge_into(target: int, c: int, extra_arcs: set[Arc],
                   extra_verts: Iterable[int]) -> None:
        comp_arcs[target] |= comp_arcs.pop(c) | extra_arcs
        for w in comp_verts.pop(c):
            absorb(target, w)
        for w in extra_verts:
            absorb(target, w)

    while len(comp_arcs) > 1:
        c = max((cid for cid in comp_arcs if cid != main),
                key=lambda cid: pos[component_root(cid)])
        root = component_root(c)
        walk = [root]
        merged = False
        for i in range(pos[root] + 1, len(chain)):
            z = chain[i]
            walk.append(z)
            if z in owner:
                if owner[z] == c:
                    raise ContractViolation(
                        f"walk from {root} re-entered its own piece at {z}"
                    )
                if z == component_root(owner[z]):
                    raise ContractViolation(
                        f"walk from {root} hit another piece's root at {z}"
                    )
                merge_into(owner[z], c,
                           set(zip(walk, walk[1:])), walk[1:-1])
                merged = True
                break
            if z in x_tail_set:
                up = min(a for a in cls.a_plus if a[0] == z)
                if up[1] not in comp_verts[main]:
                    raise ContractViolation(
                        f"upward head {up[1]} missing from the seed tree"
                    )
                merge_into(main, c,
                           set(zip(walk, walk[1:])) | {up}, walk[1:])
                merged = True
                break
        if not merged:
            raise ContractViolation(
                f"walk from {root} fell off the degenerate path"
            )

    tree = InTree(inst.t, frozenset(comp_arcs[main]))
    bad = in_tree_violations(d, tree)
    if bad:
        raise ContractViolation("back-arc in-tree invalid: " + "; ".join(bad))
    lost = [chosen[v] for v in cls.y_tails if chosen[v] not in tree.arcs]
    if lost:
        raise ContractViolation(f"chosen back arcs {lost} missing from the tree")
    return tree


def _certify_back_arc_tree(
    inst: Instance, dec: CutDecomposition, cls: PathArcClassification
) -> Certificate:
    """YES from >= k on-path back arcs: all of them sit in the built
    in-branching and none can sit in any out-branching."""
    tree = build_A_zero_in_tree(inst, dec, cls)
    t_minus = extend_in_tree(inst.d, tree)
    t_plus = _any_out_branching(inst.d, inst.s)
    dist = distinctness(t_plus, t_minus)
    if dist < inst.k:
        raise ContractViolation(
            f"back-arc certificate reached only {dist} < k={inst.k}"
        )
    return Certificate(inst.k, t_plus, t_minus, dist)


def build_nondegen_out_tree(
    inst: Instance, dec: CutDecomposition, nodes: tuple[int, ...]
) -> OutTree:
    """Out-tree with one leaf per non-degenerate diblock on a monotone path.

    At every non-degenerate node two disjoint continuations exist inside
    its subtree: one toward the next node, one to a spare diblock vertex
    that stays behind as a leaf.  Stretches of degenerate nodes in between
    are forced single arcs.
    """
    s = dec.root
    for a, b in zip(nodes, nodes[1:]):
        if dec.parent.get(b) != a:
            raise ContractViolation(f"{nodes} is not a monotone tree path")
    targets = [x for x in nodes if not dec.is_degenerate(x)]
    if not targets:
        raise ContractViolation("no non-degenerate diblock on the path")

    d = inst.d
    arcs: set[Arc] = set()
    verts: set[int] = {s}

    def extend_path(p: Sequence[int]) -> None:
        for a, b in zip(p, p[1:]):
            if not d.has_arc(a, b):
                raise ContractViolation(f"constructed walk uses non-arc ({a}, {b})")
            if b in verts:
                raise ContractViolation(f"construction revisits vertex {b}")
            arcs.add((a, b))
            verts.add(b)

    idx = {x: i for i, x in enumerate(nodes)}
    extend_path(nodes[: idx[targets[0]] + 1])
    for j, x in enumerate(targets[:-1]):
        nxt = nodes[idx[x] + 1]
        spares = dec.diblocks[x] - {x, nxt}
        if not spares:
            raise ContractViolation(f"non-degenerate diblock of {x} has no spare")
        pair = two_disjoint_paths(d, x, nxt, min(spares),
                                  within=dec.subtree_vertices(x))
        extend_path(pair.p1)
        extend_path(pair.p2)
        extend_path(nodes[idx[nxt]: idx[targets[j + 1]] + 1])

    tree = OutTree(s, frozenset(arcs))
    bad = out_tree_violations(d, tree)
    if bad:
        raise ContractViolation("chain out-tree invalid: " + "; ".join(bad))
    if count_leaves(tree) < len(targets):
        raise ContractViolation(
            f"chain tree has {count_leaves(tree)} leaves, needs {len(targets)}"
        )
    return tree


def reroot_out_tree(dec: CutDecomposition, tree: OutTree) -> OutTree:
    """Carry a leaf-rich out-tree over to the decomposition root.

    Route root-to-tree-root hitting at most half of the off-spine leaves,
    then graft each missing leaf by the tail of its original tree path.
    Keeps >= (leaves - height)/2 leaves, and >= (leaves - 1)/2 when the
    tree root sits in the root diblock.
    """
    s = dec.root
    if tree.root == s:
        return tree
    ell = count_leaves(tree)
    spine_nodes = set(dec.node_path(dec.deepest_node_for(tree.root)))
    keep = tree.leaves() - spine_nodes - {tree.root}
    route = _route_avoiding(dec, tree.root, frozenset(keep))
    arcs: set[Arc] = set(zip(route, route[1:]))
    verts: set[int] = set(route)

    parent = {v: u for u, v in tree.arcs}

    def tree_walk_to(v: int) -> list[int]:
        walk = [v]
        while walk[-1] != tree.root:
            walk.append(parent[walk[-1]])
        walk.reverse()
        return walk

    for v in sorted(keep - verts):
        walk = tree_walk_to(v)
        anchor = max(i for i, w in enumerate(walk) if w in verts)
        graft = walk[anchor:]
        arcs.update(zip(graft, graft[1:]))
        verts.update(graft)

    out = OutTree(s, frozenset(arcs))
    bad = out_tree_violations(dec.host, out)
    if bad:
        raise ContractViolation("rerooted tree invalid: " + "; ".join(bad))
    got = count_leaves(out)
    need = max(0, (ell - dec.height() + 1) // 2)
    if tree.root in dec.diblocks[s]:
        need = max(need, ell // 2)
    if got < need:
        raise ContractViolation(f"rerooting kept {got} leaves, promised {need}")
    return out


# -- the exact oracle ----------------------------------------------------------


def oracle_solve(
    d: Digraph, s: int, t: int, k: int, cap: int | None = None
) -> tuple[bool, Certificate | None]:
    """Ground truth by enumeration: best partner per out-branching.

    Exact for any input, but refuses digraphs above the vertex cap
    (default 12; override via ARBOR_ORACLE_CAP or the ``cap`` argument).
    """
    limit = cap if cap is not None else oracle_cap()
    if d.n > limit:
        raise OracleCapExceeded(
            f"instance has {d.n} > {limit} vertices; raise {_CAP_ENV} to force"
        )
    if not (has_rooted_out_branching(d, s) and has_rooted_in_branching(d, t)):
        return False, None
    if k <= 0:
        t_plus = _any_out_branching(d, s)
        t_minus = _any_in_branching(d, t)
        return True, Certificate(k, t_plus, t_minus,
                                 distinctness(t_plus, t_minus))
    for arcs in enumerate_out_branchings(d, s):
        t_plus = Branching(d, s, "out", arcs)
        t_minus = min_overlap_in_branching(d, t_plus, t)
        dist = distinctness(t_plus, t_minus)
        if dist >= k:
            return True, Certificate(k, t_plus, t_minus, dist)
    return False, None


# -- the pipeline ----------------------------------------------------------------


def _finish(
    original: Digraph,
    s0: int,
    t0: int,
    k: int,
    cert: Certificate,
    lifts: list,
    trace: list[str],
    branch: str,
) -> SolveResult:
    lifted = _lift_certificate(cert, lifts)
    if not verify_certificate(original, s0, t0, k, lifted):
        raise ContractViolation(f"lifted certificate failed verification ({branch})")
    trace.append(f"certificate verified on the original digraph ({branch})")
    return SolveResult(True, lifted, tuple(trace), branch)


def solve(d: Digraph, s: int, t: int, k: int) -> SolveResult:
    """Decide k-distinct branchings rooted at s (out) and t (in).

    Returns answer True/False with a verified certificate on YES, or None
    when only the capped oracle could have decided and the leftover
    instance exceeds its cap.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    trace: list[str] = []
    lifts: list = []

    inst = reduce_instance(d, s, t, k)
    if inst is REJECT:
        trace.append("rejected: missing a rooted out- or in-branching")
        return SolveResult(False, None, tuple(trace), "reject")
    trace.append(f"reduction removed {d.m - inst.d.m} arcs")
    if inst.d != d:
        lifts.append(_HostLift(d, s, t))

    if k == 0:
        t_plus = _any_out_branching(inst.d, s)
        t_minus = _any_in_branching(inst.d, t)
        cert = Certificate(0, t_plus, t_minus, distinctness(t_plus, t_minus))
        trace.append("k = 0: any branching pair works")
        return _finish(d, s, t, k, cert, lifts, trace, "k0")

    if inst.d.n == 1:
        trace.append("single vertex: distinctness is capped at 0")
        return SolveResult(False, None, tuple(trace), "trivial-no")

    if s != t:
        aux = (t, s)
        if aux in inst.d.arc_positions:
            raise ContractViolation("reduction left a useless return arc behind")
        lifts.append(_HostLift(inst.d, s, t, forbidden=aux))
        inst = reduce_instance(inst.d.with_arcs(add=[aux]), s, t, k, aux)
        if inst is REJECT:
            raise ContractViolation("adding the return arc broke the instance")
        trace.append(f"flagged return arc {aux} added")

    while True:
        dec = build_cut_decomposition(inst.d, inst.s)
        r_s, r_t = compute_Rs_Rt(inst, dec)
        inst = replace(inst, r_s=r_s, r_t=r_t)
        paths = sorted(degenerate_paths(dec),
                       key=lambda p: dec.depth[p.nodes[0]])

        changed = False
        for path in paths:
            inst2, gone = apply_rule1(inst, dec, path)
            if gone:
                trace.append(f"rule 1 dropped {sorted(gone)} on path {path.nodes}")
                lifts.append(_HostLift(inst.d, inst.s, inst.t))
                inst = inst2
                changed = True
                break
        if changed:
            continue

        for path in paths:
            cls = classify_path_arcs(inst, dec, path)
            cert = _certify_upward_surplus(inst, dec, cls)
            if cert is not None:
                trace.append(
                    f"upward-arc surplus on path {path.nodes}: "
                    f"{len(cls.a_plus & inst.r_t)} >= 2k+2"
                )
                return _finish(d, s, t, k, cert, lifts, trace, "upward-surplus")
            if inst.t in path.nodes:
                continue
            usable_tails = {a[0] for a in cls.a_plus - inst.r_t}
            if len(usable_tails) >= inst.k + 1:
                tree = build_A_plus_in_tree(inst, dec, cls)
                if count_leaves(tree) >= inst.k + 1:
                    trace.append(
                        f"{count_leaves(tree)} upward tails on path "
                        f"{path.nodes} feed an in-tree"
                    )
                    cert = _certify_leafy_in(inst, tree)
                    return _finish(d, s, t, k, cert, lifts, trace,
                                   "upward-tails")
                cert = _certify_packed_upward(inst, cls)
                if cert is not None:
                    trace.append(
                        f"upward-arc packing on path {path.nodes} withholds "
                        f"{cert.distinctness} chain arcs"
                    )
                    return _finish(d, s, t, k, cert, lifts, trace,
                                   "upward-tails")
                trace.append(
                    f"only {count_leaves(tree)} of {len(usable_tails)} "
                    f"upward tails pack on path {path.nodes}"
                )
            if len(cls.y_tails) >= inst.k:
                cert = _certify_back_arc_tree(inst, dec, cls)
                trace.append(
                    f"{len(cls.y_tails)} on-path back-arc tails on path "
                    f"{path.nodes}"
                )
                return _finish(d, s, t, k, cert, lifts, trace, "back-arc-tails")

        contracted = False
        for path in paths:
            inst2, rec = apply_rule2(inst, dec, path)
            if rec is not None:
                trace.append(
                    f"rule 2 merged {rec.segment} "
                    f"({inst.d.n} -> {inst2.d.n} vertices)"
                )
                lifts.append(rec)
                inst = inst2
                contracted = True
                break
        if contracted:
            continue
        break

    chain, nondegen = longest_monotone_path(dec)
    if nondegen >= inst.k + 1:
        tree = build_nondegen_out_tree(inst, dec, chain)
        trace.append(
            f"monotone path {chain} holds {nondegen} non-degenerate diblocks"
        )
        cert = _certify_leafy_out(inst, tree)
        return _finish(d, s, t, k, cert, lifts, trace, "nondegen-path")

    for path in degenerate_paths(dec):
        bound = 8 * inst.k + 1 if inst.t not in path.nodes else 16 * inst.k + 3
        if len(path.nodes) > bound:
            raise ContractViolation(
                f"degenerate path {path.nodes} exceeds the {bound}-node bound"
            )

    height = dec.height()
    threshold = 2 * inst.k + 2 + height
    trace.append(f"height {height}; hunting {threshold}-leaf out-branchings")
    for root in range(inst.d.n):
        if not has_rooted_out_branching(inst.d, root):
            continue
        witness = max_leaf_out_branching(inst.d, root, threshold)
        if witness is None:
            continue
        tree = reroot_out_tree(dec, OutTree(witness.root, witness.arcs))
        trace.append(
            f"out-branching at {root} with {count_leaves(witness)} leaves, "
            f"rerooted with {count_leaves(tree)} at s"
        )
        cert = _certify_leafy_out(inst, tree)
        return _finish(d, s, t, k, cert, lifts, trace, "maxleaf-reroot")

    cap = oracle_cap()
    if inst.d.n > cap:
        trace.append(f"oracle cap {cap} < {inst.d.n} vertices: undecided")
        return SolveResult(None, None, tuple(trace), "undecided")
    answer, cert = oracle_solve(inst.d, inst.s, inst.t, inst.k)
    trace.append(
        f"exact search on {inst.d.n} vertices: {'YES' if answer else 'NO'}"
    )
    if not answer:
        return SolveResult(False, None, tuple(trace), "oracle")
    return _finish(d, s, t, k, cert, lifts, trace, "oracle")


# -- root-free variants ----------------------------------------------------------


def _strongly_connected(d: Digraph) -> bool:
    if d.n == 0:
        return False
    comp, _ = scc_condensation(d)
    return len(set(comp)) == 1


def _leafy_shortcut(d: Digraph, k: int) -> Certificate | None:
    """On strongly connected digraphs: k+1 leaves anywhere settle it."""
    for v in range(d.n):
        witness = max_leaf_out_branching(d, v, k + 1)
        if witness is None:
            continue
        t_minus = _any_in_branching(d, v)
        dist = distinctness(witness, t_minus)
        if dist < k:
            raise ContractViolation(
                f"{count_leaves(witness)}-leaf branching only {dist}-distinct"
            )
        return Certificate(k, witness, t_minus, dist)
    return None


def solve_unrooted(d: Digraph, k: int) -> tuple[bool | None, Certificate | None]:
    """YES iff some ordered terminal pair admits k-distinct branchings."""
    if _strongly_connected(d):
        cert = _leafy_shortcut(d, k)
        if cert is not None:
            return True, cert
    sources = [v for v in range(d.n) if has_rooted_out_branching(d, v)]
    sinks = [v for v in range(d.n) if has_rooted_in_branching(d, v)]
    undecided = False
    for s in sources:
        for t in sinks:
            res = solve(d, s, t, k)
            if res.answer:
                return True, res.certificate
            if res.answer is None:
                undecided = True
    return (None, None) if undecided else (False, None)


def solve_single_root(d: Digraph, k: int) -> tuple[bool | None, Certificate | None]:
    """Same-root variant; only strongly connected digraphs can say YES."""
    if not _strongly_connected(d):
        return False, None
    cert = _leafy_shortcut(d, k)
    if cert is not None:
        return True, cert
    undecided = False
    for v in range(d.n):
        res = solve(d, v, v, k)
        if res.answer:
            return True, res.certificate
        if res.answer is None:
            undecided = True
    return (None, None) if undecided else (False, None)
