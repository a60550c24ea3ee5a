"""Kernel selection.

The compiled extension is used when it imports; ``DYNCOL_PURE_PYTHON=1``
forces the pure-Python implementation.  Both modules expose the same
functions and are checked against each other in the test suite.
"""

import os

from . import _pykernels as python_kernels

compiled_kernels = None
if os.environ.get("DYNCOL_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as compiled_kernels
    except ImportError:
        compiled_kernels = None

active = compiled_kernels if compiled_kernels is not None else python_kernels
BACKEND = active.BACKEND

first_improper_edge = active.first_improper_edge
first_starved_vertex = active.first_starved_vertex
brute_force_colouring = active.brute_force_colouring
brute_force_gamma = active.brute_force_gamma
