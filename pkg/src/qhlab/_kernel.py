"""Shortest-path backend selection: compiled kernel if built, else pure Python.

Set ``QHLAB_FORCE_PYTHON=1`` to force the fallback lane (used by the
benchmark and the lane-equivalence tests).
"""

import os

from . import _pypaths

if os.environ.get("QHLAB_FORCE_PYTHON"):
    _impl = _pypaths
else:
    try:
        from . import _fastpaths as _impl
    except ImportError:
        _impl = _pypaths

dijkstra_csr = _impl.dijkstra_csr
BACKEND = _impl.BACKEND


def backend_name() -> str:
    return BACKEND


def compiled_available() -> bool:
    try:
        from . import _fastpaths  # noqa: F401
        return True
    except ImportError:
        return False
