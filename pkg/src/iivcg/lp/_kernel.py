"""Selects the simplex kernel at import time.

The compiled ``_simplex_core`` extension is used when it was built; otherwise
the pure-Python ``_simplex_py`` module is used.  Setting the environment
variable ``IIVCG_PURE_PYTHON=1`` forces the fallback.
"""
import os

from . import _simplex_py

try:
    if os.environ.get("IIVCG_PURE_PYTHON"):
        raise ImportError("pure-Python kernel forced")
    from . import _simplex_core as _compiled
except ImportError:
    _compiled = None

KERNELS = {"python": _simplex_py}
if _compiled is not None:
    KERNELS["compiled"] = _compiled

_active = _compiled if _compiled is not None else _simplex_py


def active():
    return _active


def name():
    return "compiled" if _active is _compiled and _compiled is not None else "python"


def use(kernel: str) -> None:
    """Switch the kernel used by subsequent ``solve`` calls ("python" or "compiled")."""
    global _active
    try:
        _active = KERNELS[kernel]
    except KeyError:
        raise ValueError(f"kernel {kernel!r} is not available; have {sorted(KERNELS)}") from None
