"""Pure-Python kernel backend.

The compiled backend in ``_ckernels.pyx`` is a line-for-line translation of
this module; any behavioural change here must be mirrored there.  All three
kernels are deterministic: adjacency is consumed in CSR order (the caller
stores arcs sorted) and ties in Edmonds' algorithm go to the earliest arc.
"""

from __future__ import annotations

BACKEND = "py"


def reach(n, indptr, indices, src, allowed=None):
    """BFS over a CSR adjacency; returns a bytearray of visited flags.

    ``allowed`` is an optional byte mask; vertices with a zero entry are
    treated as deleted (the source must be allowed).
    """
    seen = bytearray(n)
    if allowed is not None and not allowed[src]:
        return seen
    seen[src] = 1
    queue = [src]
    head = 0
    while head < len(queue):
        u = queue[head]
        head += 1
        for p in range(indptr[u], indptr[u + 1]):
            v = indices[p]
            if seen[v]:
                continue
            if allowed is not None and not allowed[v]:
                continue
            seen[v] = 1
            queue.append(v)
    return seen


def _split_network(n, indptr, indices, allowed):
    """Vertex-split unit-capacity network used by ``bireach``.

    Node 2v is the entry copy of v, 2v+1 the exit copy.  Every copy pair is
    joined by a unit arc and every original arc (u, w) becomes a unit arc
    from 2u+1 to 2w.  Residual arcs are paired as i ^ 1.
    """
    to = []
    cap = []
    adj = [[] for _ in range(2 * n)]

    def add(a, b):
        adj[a].append(len(to))
        to.append(b)
        cap.append(1)
        adj[b].append(len(to))
        to.append(a)
        cap.append(0)

    for v in range(n):
        if allowed is None or allowed[v]:
            add(2 * v, 2 * v + 1)
    for u in range(n):
        if allowed is not None and not allowed[u]:
            continue
        for p in range(indptr[u], indptr[u + 1]):
            w = indices[p]
            if allowed is None or allowed[w]:
                add(2 * u + 1, 2 * w)
    return to, cap, adj


def _augment(source, sink, to, cap, adj, parent):
    """One unit BFS augmentation; returns True when a path was found."""
    for i in range(len(parent)):
        parent[i] = -1
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


def bireach(n, indptr, indices, r, allowed=None):
    """Membership flags for vertices with two internally disjoint r-paths.

    ``out[v]`` is 1 iff there are two distinct r->v paths sharing no
    internal vertex (v != r).  Computed as a value-2 max-flow from the exit
    copy of r to the entry copy of v in the vertex-split unit network; unit
    arc capacities rule out using a direct arc twice.
    """
    out = bytearray(n)
    if allowed is not None and not allowed[r]:
        return out
    to, cap_template, adj = _split_network(n, indptr, indices, allowed)
    cap = list(cap_template)
    parent = [-1] * (2 * n)
    source = 2 * r + 1
    for v in range(n):
        if v == r or (allowed is not None and not allowed[v]):
            continue
        for i in range(len(cap_template)):
            cap[i] = cap_template[i]
        sink = 2 * v
        if _augment(source, sink, to, cap, adj, parent) and _augment(
            source, sink, to, cap, adj, parent
        ):
            out[v] = 1
    return out


def edmonds(n, tails, heads, weights, root):
    """Maximum-weight spanning out-branching rooted at ``root``.

    Arc data is given as parallel sequences; weights must be integers
    (Python ints here, so overflow is impossible).  Returns
    ``(total_weight, chosen)`` where ``chosen`` lists one original arc index
    per non-root vertex in ascending order, or ``None`` when no spanning
    branching exists.  Ties break toward the earliest arc in input order.
    """
    if n == 1:
        return 0, []

    # refs[level][pos] = position of the arc one level down (level 0: the
    # original arc index).  contractions[level] describes how level+1 was
    # built: the cycle, its chosen in-arcs and the node relabelling.
    cur_t = []
    cur_h = []
    cur_w = []
    ref0 = []
    for i in range(len(tails)):
        if heads[i] != root and tails[i] != heads[i]:
            cur_t.append(tails[i])
            cur_h.append(heads[i])
            cur_w.append(weights[i])
            ref0.append(i)

    refs = [ref0]
    contractions = []
    node_cnt = n
    cur_root = root

    while True:
        m = len(cur_t)
        best = [-1] * node_cnt
        for pos in range(m):
            v = cur_h[pos]
            if v == cur_root:
                continue
            b = best[v]
            if b == -1 or cur_w[pos] > cur_w[b]:
                best[v] = pos
        for v in range(node_cnt):
            if v != cur_root and best[v] == -1:
                return None  # v (or the set it contracts) is unreachable

        # find a cycle in the functional graph v -> tail(best[v])
        color = [0] * node_cnt  # 0 new, 1 on current walk, 2 done
        color[cur_root] = 2
        cycle = None
        for start in range(node_cnt):
            if color[start] != 0:
                continue
            path = []
            v = start
            while color[v] == 0:
                color[v] = 1
                path.append(v)
                v = cur_t[best[v]]
            if color[v] == 1:
                cycle = path[path.index(v):]
            for u in path:
                color[u] = 2
            if cycle is not None:
                break

        if cycle is None:
            selected = [best[v] for v in range(node_cnt) if v != cur_root]
            break

        cycle_set = set(cycle)
        node_map = [0] * node_cnt
        nxt = 0
        cyc_id = -1
        for v in range(node_cnt):
            if v in cycle_set:
                if cyc_id == -1:
                    cyc_id = nxt
                    nxt += 1
                node_map[v] = cyc_id
            else:
                node_map[v] = nxt
                nxt += 1

        cycle_arc = {v: best[v] for v in cycle}
        contractions.append((cycle, cycle_arc, cycle_set))

        new_t = []
        new_h = []
        new_w = []
        new_ref = []
        for pos in range(m):
            t2 = node_map[cur_t[pos]]
            h2 = node_map[cur_h[pos]]
            if t2 == h2:
                continue
            w2 = cur_w[pos]
            if cur_h[pos] in cycle_set:
                w2 = w2 - cur_w[cycle_arc[cur_h[pos]]]
            new_t.append(t2)
            new_h.append(h2)
            new_w.append(w2)
            new_ref.append(pos)
        heads_here = cur_h
        cur_t, cur_h, cur_w = new_t, new_h, new_w
        refs.append(new_ref)
        contractions[-1] = (cycle, cycle_arc, cycle_set, heads_here)
        node_cnt = nxt
        cur_root = node_map[cur_root]

    # expand: walk the contractions from the last one back to the first,
    # translating arc positions down one level each time
    for level in range(len(contractions), 0, -1):
        selected = [refs[level][pos] for pos in selected]
        cycle, cycle_arc, cycle_set, heads_prev = contractions[level - 1]
        entered = -1
        for pos in selected:
            if heads_prev[pos] in cycle_set:
                entered = heads_prev[pos]
                break
        for v in cycle:
            if v != entered:
                selected.append(cycle_arc[v])

    chosen = sorted(refs[0][pos] for pos in selected)
    total = 0
    for i in chosen:
        total += weights[i]
    return total, chosen
