"""Kernel selection: compiled extension if importable, else pure Python.

Set ``REVMULT_PURE_PYTHON=1`` to force the fallback.
"""
import os

import numpy as np

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if not os.environ.get("REVMULT_PURE_PYTHON"):
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        pass


def _table(table):
    return np.ascontiguousarray(table, dtype=np.int32).reshape(-1, 4)


def simulate(table, state, start=0, stop=None):
    """Run gates ``[start, stop)`` of ``table`` on a bit-sliced ``(width, nwords)`` uint64 state in place."""
    _impl.simulate(_table(table), state, start, stop)


def toffoli_depth(table, width):
    return int(_impl.toffoli_depth(_table(table), width))


def kernels(name):
    """Return the kernel module called ``name`` ('python' or 'cython')."""
    if name == "python":
        return _pykernels
    from . import _ckernels

    return _ckernels
