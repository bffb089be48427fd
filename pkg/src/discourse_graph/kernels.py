"""Backend selection for the graph kernels.

The compiled extension is used when it imports; otherwise, or when
``DISCOURSE_GRAPH_PURE_PYTHON=1`` is set, the pure-Python twin is used.
``DISCOURSE_GRAPH_THREADS`` caps the worker threads of the compiled kernels.
"""

from __future__ import annotations

import os

from . import _pykernels

try:
    if os.environ.get("DISCOURSE_GRAPH_PURE_PYTHON") == "1":
        raise ImportError("pure-Python kernels requested")
    from . import _kernels as _compiled
except ImportError:
    _compiled = None

impl = _compiled if _compiled is not None else _pykernels
BACKEND = "compiled" if _compiled is not None else "python"


def backends() -> dict:
    """Available kernel modules by name."""
    out = {"python": _pykernels}
    if _compiled is not None:
        out["compiled"] = _compiled
    return out


def thread_count() -> int:
    raw = os.environ.get("DISCOURSE_GRAPH_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return os.cpu_count() or 1
