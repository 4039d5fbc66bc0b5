"""Select the compiled kernels when available, else the pure-Python ones.

Set ``SPINE_PURE_PYTHON=1`` to force the fallback.
"""

import os

from spine import _pykernels

if os.environ.get("SPINE_PURE_PYTHON", "").strip() not in ("", "0"):
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from spine import _ckernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels
        BACKEND = "python"

bfs_shells = _impl.bfs_shells
move_nodes = _impl.move_nodes


def get_backend(name=None):
    """Return the kernel module called ``name`` ("cython" or "python"), or the active one."""
    if name is None:
        return _impl
    if name == "python":
        return _pykernels
    if name == "cython":
        from spine import _ckernels
        return _ckernels
    raise ValueError(f"unknown kernel backend {name!r}")
