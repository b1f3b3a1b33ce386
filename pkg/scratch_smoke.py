"""Throwaway kernel smoke checks (hand-computed expectations)."""
from arbor._kernels import _pykernels as K


def csr(n, arcs):
    arcs_sorted = sorted(arcs)
    indptr = [0] * (n + 1)
    for u, v in arcs_sorted:
        indptr[u + 1] += 1
    for i in range(n):
        indptr[i + 1] += indptr[i]
    indices = [v for _, v in arcs_sorted]
    return indptr, indices


# --- reach ---
n = 5
arcs = [(0, 1), (0, 2), (1, 3), (2, 3), (3, 4)]
ip, ix = csr(n, arcs)
assert list(K.reach(n, ip, ix, 0)) == [1, 1, 1, 1, 1]
assert list(K.reach(n, ip, ix, 3)) == [0, 0, 0, 1, 1]
mask = bytearray([1, 0, 1, 1, 1])
assert list(K.reach(n, ip, ix, 0, mask)) == [1, 0, 1, 1, 1]
assert list(K.reach(n, ip, ix, 1, bytearray([1, 0, 1, 1, 1]))) == [0, 0, 0, 0, 0]

# --- bireach: diamond with tail; only 3 has two disjoint 0-paths ---
assert list(K.bireach(n, ip, ix, 0)) == [0, 0, 0, 1, 0]
# restricted away one diamond side: nothing bi-reachable
assert list(K.bireach(n, ip, ix, 0, bytearray([1, 0, 1, 1, 1]))) == [0, 0, 0, 0, 0]
# bidirected triangle: everything bi-reachable from 0
n2 = 3
arcs2 = [(0, 1), (1, 0), (1, 2), (2, 1), (2, 0), (0, 2)]
ip2, ix2 = csr(n2, arcs2)
assert list(K.bireach(n2, ip2, ix2, 0)) == [0, 1, 1]

# --- edmonds ---
def ed(n, arcs_w, root):
    tails = [a[0] for a in arcs_w]
    heads = [a[1] for a in arcs_w]
    ws = [a[2] for a in arcs_w]
    res = K.edmonds(n, tails, heads, ws, root)
    if res is None:
        return None
    total, chosen = res
    return total, [(arcs_w[i][0], arcs_w[i][1]) for i in chosen]

# plain chain choice
assert ed(3, [(0, 1, 5), (0, 2, 3), (1, 2, 4)], 0) == (9, [(0, 1), (1, 2)])
# 2-cycle contraction, tie on entry -> earliest arc
r = ed(4, [(0, 1, 1), (0, 2, 1), (1, 2, 10), (2, 1, 10), (2, 3, 1)], 0)
assert r == (12, [(0, 1), (1, 2), (2, 3)]), r
# 3-cycle contraction
r = ed(4, [(0, 1, 1), (0, 2, 0), (1, 2, 10), (2, 3, 10), (3, 1, 10)], 0)
assert r == (21, [(0, 1), (1, 2), (2, 3)]), r
# unreachable vertex
assert ed(3, [(1, 2, 1)], 0) is None
# forced negative arc
assert ed(2, [(0, 1, -5)], 0) == (-5, [(0, 1)])
# single vertex
assert K.edmonds(1, [], [], [], 0) == (0, [])
# parallel arcs: heavier parallel wins, tie -> earliest
assert ed(2, [(0, 1, 3), (0, 1, 7)], 0) == (7, [(0, 1)])
r = K.edmonds(2, [0, 0], [1, 1], [7, 7], 0)
assert r == (7, [0]), r

# nested contraction stress: two touching cycles
r = ed(
    5,
    [(0, 1, 1), (1, 2, 10), (2, 1, 10), (2, 3, 10), (3, 2, 10), (3, 4, 1), (0, 3, 0)],
    0,
)
# expected: 0->1 (1), 1->2 (10), 2->3 (10), 3->4 (1) = 22
assert r == (22, [(0, 1), (1, 2), (2, 3), (3, 4)]), r

print("kernel smoke OK")
