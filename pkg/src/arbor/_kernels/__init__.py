"""Backend selection for the hot kernels.

Three primitives dominate the library's runtime: BFS reachability, the
value-2 flow test behind bi-reachability, and Edmonds' maximum-weight
branching algorithm.  Both backends implement the same functions with
identical semantics and tie-breaking:

* ``_ckernels``   — Cython extension (built by setup.py when possible)
* ``_pykernels``  — pure-Python twin, always available

Set ``ARBOR_KERNELS=py`` or ``ARBOR_KERNELS=c`` to force a backend; the
default prefers the compiled one and silently falls back to pure Python.
"""

from __future__ import annotations

import os

_requested = os.environ.get("ARBOR_KERNELS", "").strip().lower()
if _requested not in ("", "c", "py"):
    raise RuntimeError(
        f"ARBOR_KERNELS must be 'c' or 'py', not {_requested!r}"
    )

if _requested == "py":
    from . import _pykernels as _impl
elif _requested == "c":
    from . import _ckernels as _impl  # ImportError here is deliberate
else:
    try:
        from . import _ckernels as _impl
    except ImportError:
        from . import _pykernels as _impl

BACKEND: str = _impl.BACKEND
reach = _impl.reach
bireach = _impl.bireach
edmonds = _impl.edmonds


def load_backend(name: str):
    """Return the named backend module ('c' or 'py'); used by benchmarks."""
    if name == "py":
        from . import _pykernels

        return _pykernels
    if name == "c":
        from . import _ckernels

        return _ckernels
    raise ValueError(f"unknown kernel backend {name!r}")
