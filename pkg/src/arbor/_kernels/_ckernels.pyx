# cython: boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled kernel backend: behavioural twin of ``_pykernels``.

Same functions, same outputs, same tie-breaking; ``_pykernels`` is the
reference.  One deliberate difference: intermediate Edmonds weights live in
int64 here, so the routine raises OverflowError when a modified weight
leaves the safe window and the caller falls back to the exact pure twin.
"""

from cpython.array cimport array as carray, clone
from libc.stdlib cimport free, malloc
from libc.string cimport memcpy

BACKEND = "c"

# modified weights are kept within +/- 2^61 so that a difference of two of
# them still fits comfortably in int64
cdef long long _SAFE = (<long long>1) << 61

cdef carray _INT_TEMPLATE = carray('i')


cdef void* _xmalloc(size_t nbytes) except NULL:
    cdef void* p = malloc(nbytes if nbytes else 1)
    if p == NULL:
        raise MemoryError()
    return p


cdef carray _snapshot(int* src, Py_ssize_t k):
    cdef carray a = clone(_INT_TEMPLATE, k, False)
    if k:
        memcpy(a.data.as_ints, src, k * sizeof(int))
    return a


def reach(int n, int[:] indptr, int[:] indices, int src, allowed=None):
    """BFS over a CSR adjacency; returns a bytearray of visited flags."""
    if src < 0 or src >= n:
        raise IndexError(f"source {src} out of range")
    seen_obj = bytearray(n)
    cdef unsigned char[:] seen = seen_obj
    cdef const unsigned char[:] mask
    cdef bint masked = allowed is not None
    if masked:
        mask = allowed
        if not mask[src]:
            return seen_obj
    cdef int* queue = <int*>_xmalloc(n * sizeof(int))
    cdef Py_ssize_t head = 0, tail = 0, p
    cdef int u, v
    seen[src] = 1
    queue[tail] = src
    tail += 1
    try:
        while head < tail:
            u = queue[head]
            head += 1
            for p in range(indptr[u], indptr[u + 1]):
                v = indices[p]
                if seen[v]:
                    continue
                if masked and not mask[v]:
                    continue
                seen[v] = 1
                queue[tail] = v
                tail += 1
    finally:
        free(queue)
    return seen_obj


cdef bint _augment(int source, int sink, int* eto, signed char* cap,
                   Py_ssize_t* adj_ptr, Py_ssize_t* adj_idx,
                   Py_ssize_t* parent, int* queue, int nn) noexcept:
    """One unit BFS augmentation; returns True when a path was found."""
    cdef Py_ssize_t i, idx
    cdef Py_ssize_t head = 0, tail = 0
    cdef int u, v
    for i in range(nn):
        parent[i] = -1
    parent[source] = -2
    queue[tail] = source
    tail += 1
    while head < tail:
        u = queue[head]
        head += 1
        for i in range(adj_ptr[u], adj_ptr[u + 1]):
            idx = adj_idx[i]
            v = eto[idx]
            if cap[idx] > 0 and parent[v] == -1:
                parent[v] = idx
                if v == sink:
                    while v != source:
                        idx = parent[v]
                        cap[idx] -= 1
                        cap[idx ^ 1] += 1
                        v = eto[idx ^ 1]
                    return True
                queue[tail] = v
                tail += 1
    return False


def bireach(int n, int[:] indptr, int[:] indices, int r, allowed=None):
    """Membership flags for vertices with two internally disjoint r-paths.

    Value-2 max-flow from the exit copy of r to the entry copy of each
    candidate in the vertex-split unit network, exactly as in the pure twin.
    """
    if r < 0 or r >= n:
        raise IndexError(f"root {r} out of range")
    out_obj = bytearray(n)
    cdef unsigned char[:] out = out_obj
    cdef const unsigned char[:] mask
    cdef bint masked = allowed is not None
    if masked:
        mask = allowed
        if not mask[r]:
            return out_obj

    # count the network edges so every buffer is exact-sized
    cdef Py_ssize_t n_adds = 0, p
    cdef int u, v, w
    for v in range(n):
        if not masked or mask[v]:
            n_adds += 1
    for u in range(n):
        if masked and not mask[u]:
            continue
        for p in range(indptr[u], indptr[u + 1]):
            w = indices[p]
            if not masked or mask[w]:
                n_adds += 1

    cdef Py_ssize_t E = 2 * n_adds
    cdef int nn = 2 * n
    cdef int* eto = <int*>_xmalloc(E * sizeof(int))
    cdef int* efrom = <int*>_xmalloc(E * sizeof(int))
    cdef signed char* cap0 = <signed char*>_xmalloc(E)
    cdef signed char* cap = <signed char*>_xmalloc(E)
    cdef Py_ssize_t* adj_ptr = <Py_ssize_t*>_xmalloc((nn + 1) * sizeof(Py_ssize_t))
    cdef Py_ssize_t* adj_idx = <Py_ssize_t*>_xmalloc(E * sizeof(Py_ssize_t))
    cdef Py_ssize_t* parent = <Py_ssize_t*>_xmalloc(nn * sizeof(Py_ssize_t))
    cdef int* queue = <int*>_xmalloc(nn * sizeof(int))

    cdef Py_ssize_t e = 0, i
    cdef int a, b
    cdef int source, sink
    try:
        # edges in the same creation order as the pure twin: split arcs for
        # ascending v, then original arcs in CSR order
        for v in range(n):
            if not masked or mask[v]:
                eto[e] = 2 * v + 1
                efrom[e] = 2 * v
                cap0[e] = 1
                e += 1
                eto[e] = 2 * v
                efrom[e] = 2 * v + 1
                cap0[e] = 0
                e += 1
        for u in range(n):
            if masked and not mask[u]:
                continue
            for p in range(indptr[u], indptr[u + 1]):
                w = indices[p]
                if not masked or mask[w]:
                    eto[e] = 2 * w
                    efrom[e] = 2 * u + 1
                    cap0[e] = 1
                    e += 1
                    eto[e] = 2 * u + 1
                    efrom[e] = 2 * w
                    cap0[e] = 0
                    e += 1

        # stable counting sort of edge ids by their from-node replicates the
        # per-node append order of the pure twin's adjacency lists
        for i in range(nn + 1):
            adj_ptr[i] = 0
        for i in range(E):
            adj_ptr[efrom[i] + 1] += 1
        for i in range(nn):
            adj_ptr[i + 1] += adj_ptr[i]
        for i in range(E):
            a = efrom[i]
            adj_idx[adj_ptr[a]] = i
            adj_ptr[a] += 1
        for i in range(nn, 0, -1):
            adj_ptr[i] = adj_ptr[i - 1]
        adj_ptr[0] = 0

        source = 2 * r + 1
        for v in range(n):
            if v == r or (masked and not mask[v]):
                continue
            memcpy(cap, cap0, E)
            sink = 2 * v
            if _augment(source, sink, eto, cap, adj_ptr, adj_idx,
                        parent, queue, nn) and \
               _augment(source, sink, eto, cap, adj_ptr, adj_idx,
                        parent, queue, nn):
                out[v] = 1
    finally:
        free(eto)
        free(efrom)
        free(cap0)
        free(cap)
        free(adj_ptr)
        free(adj_idx)
        free(parent)
        free(queue)
    return out_obj


def edmonds(int n, tails, heads, weights, int root):
    """Maximum-weight spanning out-branching rooted at ``root``.

    Mirrors the pure twin: (total, ascending original arc ids) or None;
    ties go to the earliest arc.  Raises OverflowError when intermediate
    weights would leave int64's safe window.
    """
    if n == 1:
        return 0, []
    cdef list tl = list(tails)
    cdef list hl = list(heads)
    cdef list wl = list(weights)
    cdef Py_ssize_t m_in = len(tl)

    cdef int* ct = <int*>_xmalloc(m_in * sizeof(int))
    cdef int* ch = <int*>_xmalloc(m_in * sizeof(int))
    cdef long long* cw = <long long*>_xmalloc(m_in * sizeof(long long))
    cdef int* ref0 = <int*>_xmalloc(m_in * sizeof(int))
    cdef int* best = <int*>_xmalloc(n * sizeof(int))
    cdef signed char* color = <signed char*>_xmalloc(n)
    cdef int* path_buf = <int*>_xmalloc(n * sizeof(int))
    cdef int* node_map = <int*>_xmalloc(n * sizeof(int))
    cdef long long* sub = <long long*>_xmalloc(n * sizeof(long long))
    cdef unsigned char* in_cycle = <unsigned char*>_xmalloc(n)

    cdef Py_ssize_t m = 0, pos, i, mm, path_len, cyc_start
    cdef int t_, h_, v2, start, vv, nxt, cyc_id, t2, h2
    cdef int node_cnt = n
    cdef int cur_root = root
    cdef long long wv, w2
    cdef bint found
    cdef list refs = []
    cdef list contractions = []
    cdef list selected, cycle_l, cyc_arcs_l
    cdef carray arr
    cdef bytes cyc_mask

    try:
        for i in range(m_in):
            t_ = tl[i]
            h_ = hl[i]
            if h_ != root and t_ != h_:
                wv = wl[i]  # OverflowError for ints beyond int64
                if wv > _SAFE or wv < -_SAFE:
                    raise OverflowError("edmonds weight outside the int64 window")
                ct[m] = t_
                ch[m] = h_
                cw[m] = wv
                ref0[m] = i
                m += 1
        refs.append(_snapshot(ref0, m))

        while True:
            for vv in range(node_cnt):
                best[vv] = -1
            for pos in range(m):
                v2 = ch[pos]
                if v2 == cur_root:
                    continue
                if best[v2] == -1 or cw[pos] > cw[best[v2]]:
                    best[v2] = <int>pos
            for vv in range(node_cnt):
                if vv != cur_root and best[vv] == -1:
                    return None  # vv (or the set it contracts) is unreachable

            # find a cycle in the functional graph v -> tail(best[v])
            for vv in range(node_cnt):
                color[vv] = 0
            color[cur_root] = 2
            found = False
            cyc_start = 0
            for start in range(node_cnt):
                if color[start] != 0:
                    continue
                path_len = 0
                vv = start
                while color[vv] == 0:
                    color[vv] = 1
                    path_buf[path_len] = vv
                    path_len += 1
                    vv = ct[best[vv]]
                if color[vv] == 1:
                    found = True
                    cyc_start = 0
                    while path_buf[cyc_start] != vv:
                        cyc_start += 1
                for i in range(path_len):
                    color[path_buf[i]] = 2
                if found:
                    break

            if not found:
                selected = [best[vv] for vv in range(node_cnt) if vv != cur_root]
                break

            for vv in range(node_cnt):
                in_cycle[vv] = 0
            cycle_l = []
            cyc_arcs_l = []
            for i in range(cyc_start, path_len):
                vv = path_buf[i]
                in_cycle[vv] = 1
                sub[vv] = cw[best[vv]]
                cycle_l.append(vv)
                cyc_arcs_l.append(best[vv])

            nxt = 0
            cyc_id = -1
            for vv in range(node_cnt):
                if in_cycle[vv]:
                    if cyc_id == -1:
                        cyc_id = nxt
                        nxt += 1
                    node_map[vv] = cyc_id
                else:
                    node_map[vv] = nxt
                    nxt += 1

            contractions.append(
                (cycle_l, cyc_arcs_l,
                 bytes(in_cycle[i] for i in range(node_cnt)),
                 _snapshot(ch, m))
            )

            # compact in place; the write index never passes the read index
            mm = 0
            for pos in range(m):
                t2 = node_map[ct[pos]]
                h2 = node_map[ch[pos]]
                if t2 == h2:
                    continue
                w2 = cw[pos]
                if in_cycle[ch[pos]]:
                    w2 = w2 - sub[ch[pos]]
                    if w2 > _SAFE or w2 < -_SAFE:
                        raise OverflowError(
                            "edmonds weight outside the int64 window"
                        )
                ct[mm] = t2
                ch[mm] = h2
                cw[mm] = w2
                ref0[mm] = <int>pos
                mm += 1
            m = mm
            refs.append(_snapshot(ref0, m))
            node_cnt = nxt
            cur_root = node_map[cur_root]

        # expand: translate arc positions down one level at a time
        for level in range(len(contractions), 0, -1):
            arr = <carray>refs[level]
            selected = [arr.data.as_ints[pos] for pos in selected]
            cycle_l, cyc_arcs_l, cyc_mask, arr = contractions[level - 1]
            entered = -1
            for pos in selected:
                if cyc_mask[arr.data.as_ints[pos]]:
                    entered = arr.data.as_ints[pos]
                    break
            for i in range(len(cycle_l)):
                if cycle_l[i] != entered:
                    selected.append(cyc_arcs_l[i])

        arr = <carray>refs[0]
        chosen = sorted(arr.data.as_ints[pos] for pos in selected)
        total = 0
        for i in chosen:
            total += wl[i]  # Python ints: the reported total is exact
        return total, chosen
    finally:
        free(ct)
        free(ch)
        free(cw)
        free(ref0)
        free(best)
        free(color)
        free(path_buf)
        free(node_map)
        free(sub)
        free(in_cycle)
