"""Build script: compiles the optional C backend for arbor._kernels.

The package is pure Python; the Cython extension only accelerates the three
hot kernels (BFS reachability, the value-2 flow test, Edmonds' algorithm).
If Cython or a C compiler is unavailable the build silently degrades to the
pure-Python twin — everything still works, just slower.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/arbor/_kernels/_ckernels.pyx"],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    pass

try:
    setup(ext_modules=ext_modules)
except Exception:  # compiler missing/broken: install without the extension
    setup(ext_modules=[])
