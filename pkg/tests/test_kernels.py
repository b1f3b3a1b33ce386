"""Compiled and pure kernels must agree bit-for-bit, ties included."""

import random

import pytest

from arbor._kernels import BACKEND, load_backend
from arbor.digraph import Digraph

from .conftest import random_digraph

py = load_backend("py")
try:
    c = load_backend("c")
except ImportError:  # pragma: no cover - depends on the build environment
    c = None

needs_c = pytest.mark.skipif(c is None, reason="compiled kernels unavailable")


def test_backend_is_selected():
    assert BACKEND in ("c", "py")
    assert py.BACKEND == "py"


def test_load_backend_rejects_unknown():
    with pytest.raises(ValueError):
        load_backend("fortran")


def _graphs(count, seed, n_hi=12):
    rng = random.Random(seed)
    for _ in range(count):
        yield random_digraph(rng, rng.randint(1, n_hi), rng.choice((0.1, 0.3, 0.6))), rng


@needs_c
def test_reach_parity():
    for d, rng in _graphs(120, 0x5EED):
        indptr, indices = d.csr()
        for src in d.vertices:
            assert bytes(c.reach(d.n, indptr, indices, src)) == bytes(
                py.reach(d.n, indptr, indices, src)
            )


@needs_c
def test_reach_parity_with_mask():
    for d, rng in _graphs(80, 0xFACE):
        indptr, indices = d.csr()
        mask = bytearray(rng.getrandbits(1) for _ in range(d.n))
        src = rng.randrange(d.n)
        assert bytes(c.reach(d.n, indptr, indices, src, mask)) == bytes(
            py.reach(d.n, indptr, indices, src, mask)
        )


@needs_c
def test_reach_rejects_bad_source():
    d = Digraph(3, [(0, 1)])
    indptr, indices = d.csr()
    for kern in (c, py):
        with pytest.raises(IndexError):
            kern.reach(d.n, indptr, indices, 5)


@needs_c
def test_bireach_parity():
    for d, rng in _graphs(120, 0xB12E):
        indptr, indices = d.csr()
        for src in d.vertices:
            assert bytes(c.bireach(d.n, indptr, indices, src)) == bytes(
                py.bireach(d.n, indptr, indices, src)
            )


@needs_c
def test_bireach_parity_with_mask():
    for d, rng in _graphs(80, 0xD00D):
        indptr, indices = d.csr()
        mask = bytearray(rng.getrandbits(1) for _ in range(d.n))
        src = rng.randrange(d.n)
        assert bytes(c.bireach(d.n, indptr, indices, src, mask)) == bytes(
            py.bireach(d.n, indptr, indices, src, mask)
        )


@needs_c
def test_edmonds_parity_including_ties():
    for d, rng in _graphs(150, 0xED40, n_hi=9):
        if d.n == 0:
            continue
        tails = [u for u, _ in d.arcs]
        heads = [v for _, v in d.arcs]
        # small weight range forces many ties; parity must still be exact
        weights = [rng.randint(-3, 6) for _ in d.arcs]
        root = rng.randrange(d.n)
        assert c.edmonds(d.n, tails, heads, weights, root) == py.edmonds(
            d.n, tails, heads, weights, root
        )


@needs_c
def test_edmonds_single_vertex():
    assert c.edmonds(1, [], [], [], 0) == (0, [])
    assert py.edmonds(1, [], [], [], 0) == (0, [])


@needs_c
def test_edmonds_overflow_guard():
    # mutual 2-cycle with huge positive internal weights and huge negative
    # entry weights: contraction computes w' ~ -2**62 and must bail out
    big = 2**61
    n, tails, heads = 3, [0, 0, 1, 2], [1, 2, 2, 1]
    weights = [-big, -big, big, big]
    with pytest.raises(OverflowError):
        c.edmonds(n, tails, heads, weights, 0)
    total, chosen = py.edmonds(n, tails, heads, weights, 0)
    assert total == 0
    assert chosen == [0, 2]


def test_pykernel_bigints_beyond_int64():
    big = 2**200
    total, chosen = py.edmonds(
        3, [0, 0, 1, 2], [1, 2, 2, 1], [big, 1, 1, 1], 0
    )
    assert total == big + 1
    assert chosen is not None
