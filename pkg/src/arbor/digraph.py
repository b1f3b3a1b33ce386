"""Immutable simple digraphs with dense integer vertex ids.

Everything downstream (flow, branchings, decompositions, the solver) works
on this one type.  Construction sorts the arc list, so iteration order --
and therefore every algorithm built on top -- is deterministic.
"""

from __future__ import annotations

import json
from array import array
from typing import Iterable, Mapping

from ._kernels import reach

Path = tuple[int, ...]
"""A simple directed path, stored as the tuple of its vertices."""

VertexSet = frozenset[int]


class ParseError(ValueError):
    """Raised for malformed edge-list input; carries the 1-based line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class ContractViolation(RuntimeError):
    """A documented precondition or internal guarantee failed.

    Raised instead of silently producing wrong output; seeing one always
    means a caller bug or a broken invariant, never bad user input.
    """


class Digraph:
    """A finite simple digraph on vertices 0..n-1.

    Arcs are ordered pairs (u, v) with u != v, held sorted and duplicate
    free.  Instances are immutable; derived views (adjacency, CSR buffers
    for the kernels) are built lazily and cached.
    """

    __slots__ = (
        "n",
        "arcs",
        "labels",
        "_arc_pos",
        "_out",
        "_in",
        "_csr",
        "_csr_rev",
    )

    def __init__(
        self,
        n: int,
        arcs: Iterable[tuple[int, int]],
        labels: Iterable[str] | None = None,
    ):
        if n < 0:
            raise ValueError(f"vertex count must be non-negative, got {n}")
        arc_list = sorted((int(u), int(v)) for u, v in arcs)
        for i, (u, v) in enumerate(arc_list):
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"arc ({u}, {v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"self-loop ({u}, {v})")
            if i > 0 and arc_list[i - 1] == (u, v):
                raise ValueError(f"duplicate arc ({u}, {v})")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "arcs", tuple(arc_list))
        lab = None if labels is None else tuple(str(s) for s in labels)
        if lab is not None and len(lab) != n:
            raise ValueError(f"expected {n} labels, got {len(lab)}")
        object.__setattr__(self, "labels", lab)
        object.__setattr__(self, "_arc_pos", None)
        object.__setattr__(self, "_out", None)
        object.__setattr__(self, "_in", None)
        object.__setattr__(self, "_csr", None)
        object.__setattr__(self, "_csr_rev", None)

    def __setattr__(self, name, value):
        raise AttributeError("Digraph is immutable")

    # -- basic queries -------------------------------------------------

    @property
    def m(self) -> int:
        return len(self.arcs)

    @property
    def vertices(self) -> range:
        return range(self.n)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Digraph):
            return NotImplemented
        return (
            self.n == other.n
            and self.arcs == other.arcs
            and self.labels == other.labels
        )

    def __hash__(self) -> int:
        return hash((self.n, self.arcs, self.labels))

    def __repr__(self) -> str:
        return f"Digraph(n={self.n}, m={self.m})"

    def has_arc(self, u: int, v: int) -> bool:
        return (u, v) in self.arc_positions

    def arc_id(self, u: int, v: int) -> int:
        """Index of arc (u, v) in ``self.arcs``; KeyError when absent."""
        return self.arc_positions[(u, v)]

    @property
    def arc_positions(self) -> Mapping[tuple[int, int], int]:
        pos = self._arc_pos
        if pos is None:
            pos = {a: i for i, a in enumerate(self.arcs)}
            object.__setattr__(self, "_arc_pos", pos)
        return pos

    @property
    def out_adj(self) -> tuple[tuple[int, ...], ...]:
        """out_adj[u] is the sorted tuple of heads of arcs leaving u."""
        out = self._out
        if out is None:
            buckets: list[list[int]] = [[] for _ in range(self.n)]
            for u, v in self.arcs:
                buckets[u].append(v)
            out = tuple(tuple(b) for b in buckets)
            object.__setattr__(self, "_out", out)
        return out

    @property
    def in_adj(self) -> tuple[tuple[int, ...], ...]:
        """in_adj[v] is the sorted tuple of tails of arcs entering v."""
        inn = self._in
        if inn is None:
            buckets: list[list[int]] = [[] for _ in range(self.n)]
            for u, v in self.arcs:
                buckets[v].append(u)
            inn = tuple(tuple(sorted(b)) for b in buckets)
            object.__setattr__(self, "_in", inn)
        return inn

    def out_degree(self, v: int) -> int:
        return len(self.out_adj[v])

    def in_degree(self, v: int) -> int:
        return len(self.in_adj[v])

    # -- kernel plumbing -----------------------------------------------

    def csr(self) -> tuple[array, array]:
        """Forward adjacency as (indptr, indices) int arrays."""
        csr = self._csr
        if csr is None:
            indptr = array("i", [0] * (self.n + 1))
            indices = array("i", [0] * self.m)
            for i, (u, v) in enumerate(self.arcs):
                indptr[u + 1] += 1
                indices[i] = v
            for i in range(self.n):
                indptr[i + 1] += indptr[i]
            csr = (indptr, indices)
            object.__setattr__(self, "_csr", csr)
        return csr

    def csr_rev(self) -> tuple[array, array]:
        """Reverse adjacency as (indptr, indices) int arrays."""
        csr = self._csr_rev
        if csr is None:
            indptr = array("i", [0] * (self.n + 1))
            for _, v in self.arcs:
                indptr[v + 1] += 1
            for i in range(self.n):
                indptr[i + 1] += indptr[i]
            fill = list(indptr[:-1])
            indices = array("i", [0] * self.m)
            for u, v in self.arcs:
                indices[fill[v]] = u
                fill[v] += 1
            csr = (indptr, indices)
            object.__setattr__(self, "_csr_rev", csr)
        return csr

    # -- derived digraphs ----------------------------------------------

    def reverse(self) -> "Digraph":
        """The digraph with every arc flipped; an involution."""
        return Digraph(self.n, ((v, u) for u, v in self.arcs), self.labels)

    def with_arcs(
        self,
        add: Iterable[tuple[int, int]] = (),
        drop: Iterable[tuple[int, int]] = (),
    ) -> "Digraph":
        """Copy with the given arcs added and/or removed."""
        arcs = set(self.arcs)
        arcs.difference_update(tuple(a) for a in drop)
        arcs.update(tuple(a) for a in add)
        return Digraph(self.n, arcs, self.labels)

    # -- serialization ---------------------------------------------------

    def to_json(self) -> str:
        obj: dict = {"n": self.n, "arcs": [list(a) for a in self.arcs]}
        if self.labels is not None:
            obj["labels"] = list(self.labels)
        return json.dumps(obj, indent=2, sort_keys=True)

    @staticmethod
    def from_json(text: str) -> "Digraph":
        obj = json.loads(text)
        return Digraph(obj["n"], [tuple(a) for a in obj["arcs"]], obj.get("labels"))


def parse_edge_list(text: str | bytes, dedup: bool = False) -> Digraph:
    """Parse the plain edge-list format.

    The first significant line is ``n m``; the next m significant lines are
    ``u v`` arcs.  ``#`` starts a comment (full-line or trailing) and blank
    lines are skipped.  Errors carry the offending 1-based line number.
    With ``dedup`` set, repeated arcs collapse instead of failing.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    header: tuple[int, int] | None = None
    arcs: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    arc_lines = 0
    last_line = 0
    for line_no, raw in enumerate(text.splitlines(), start=1):
        last_line = line_no
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(line_no, f"expected two integers, got {line!r}")
        try:
            a, b = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(line_no, f"expected two integers, got {line!r}") from None
        if header is None:
            if a < 0 or b < 0:
                raise ParseError(line_no, f"invalid header {line!r}")
            header = (a, b)
            continue
        n, m = header
        if arc_lines >= m:
            raise ParseError(line_no, f"more than {m} arc lines")
        arc_lines += 1
        if not (0 <= a < n and 0 <= b < n):
            raise ParseError(line_no, f"vertex id out of range in {line!r}")
        if a == b:
            raise ParseError(line_no, f"self-loop {a} -> {b}")
        if (a, b) in seen:
            if not dedup:
                raise ParseError(line_no, f"duplicate arc {a} -> {b}")
            continue
        seen.add((a, b))
        arcs.append((a, b))
    if header is None:
        raise ParseError(last_line + 1, "missing 'n m' header")
    n, m = header
    if arc_lines != m:
        raise ParseError(last_line + 1, f"expected {m} arcs, found {arc_lines}")
    return Digraph(n, arcs)


def format_edge_list(d: Digraph) -> str:
    """Inverse of :func:`parse_edge_list` (canonical sorted arc order)."""
    lines = [f"{d.n} {d.m}"]
    lines.extend(f"{u} {v}" for u, v in d.arcs)
    return "\n".join(lines) + "\n"


def _mask(n: int, allowed: Iterable[int] | None) -> bytearray | None:
    if allowed is None:
        return None
    m = bytearray(n)
    for v in allowed:
        m[v] = 1
    return m


def reachable_set(
    d: Digraph, v: int, allowed: Iterable[int] | None = None
) -> VertexSet:
    """Vertices reachable from v by a directed path (v included).

    With ``allowed`` given, paths are confined to that vertex set (the
    induced subdigraph); v itself must be allowed or the result is empty.
    """
    if not (0 <= v < d.n):
        raise ValueError(f"vertex {v} out of range")
    indptr, indices = d.csr()
    flags = reach(d.n, indptr, indices, v, _mask(d.n, allowed))
    return frozenset(i for i in range(d.n) if flags[i])


def has_rooted_out_branching(d: Digraph, s: int) -> bool:
    """True iff every vertex is reachable from s (an s-rooted out-branching exists)."""
    return len(reachable_set(d, s)) == d.n


def has_rooted_in_branching(d: Digraph, t: int) -> bool:
    """True iff t is reachable from every vertex (a t-rooted in-branching exists)."""
    return len(reachable_set(d.reverse(), t)) == d.n


def scc_condensation(d: Digraph) -> tuple[list[int], Digraph]:
    """Strongly connected components and the condensed DAG.

    Returns ``(comp, dag)`` where comp[v] is the component id of v and dag
    has one vertex per component with deduplicated arcs.  Component ids are
    assigned in topological order of the condensation (sources first),
    which also makes them deterministic.
    """
    n = d.n
    out = d.out_adj
    index = [-1] * n
    low = [0] * n
    on_stack = bytearray(n)
    stack: list[int] = []
    comp = [-1] * n
    counter = 0
    ncomp = 0
    # iterative Tarjan; frames carry (vertex, next-child index)
    for root in range(n):
        if index[root] != -1:
            continue
        frames = [(root, 0)]
        while frames:
            v, ci = frames.pop()
            if ci == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = 1
            advanced = False
            for j in range(ci, len(out[v])):
                w = out[v][j]
                if index[w] == -1:
                    frames.append((v, j + 1))
                    frames.append((w, 0))
                    advanced = True
                    break
                if on_stack[w] and low[w] < low[v]:
                    low[v] = low[w]
            if advanced:
                continue
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on_stack[w] = 0
                    comp[w] = ncomp
                    if w == v:
                        break
                ncomp += 1
            if frames:
                parent = frames[-1][0]
                if low[v] < low[parent]:
                    low[parent] = low[v]
    # Tarjan emits components in reverse topological order; flip the ids
    comp = [ncomp - 1 - c for c in comp]
    dag_arcs = {
        (comp[u], comp[v]) for u, v in d.arcs if comp[u] != comp[v]
    }
    return comp, Digraph(ncomp, dag_arcs)
