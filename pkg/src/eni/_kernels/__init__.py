"""Kernel backend selection: compiled extension with a pure-Python fallback.

The compiled radial-sweep kernel is preferred when its extension module
imported cleanly; otherwise the pure-Python reference in ``star_py`` is used.
Set ``ENI_KERNEL=python`` or ``ENI_KERNEL=compiled`` to force a backend
(forcing ``compiled`` raises if the extension is missing).
"""

from __future__ import annotations

import os

from . import star_py

_forced = os.environ.get("ENI_KERNEL", "").strip().lower()

_compiled = None
if _forced != "python":
    try:
        from . import _star_cy as _compiled
    except ImportError:
        if _forced == "compiled":
            raise ImportError(
                "ENI_KERNEL=compiled but the compiled kernel extension is not built"
            )
        _compiled = None

active = _compiled if _compiled is not None else star_py


def backend_name() -> str:
    return "python" if active is star_py else "compiled"


def get_backend(name: str):
    """Fetch a backend by name ("python" or "compiled"), for tests/benchmarks."""
    if name == "python":
        return star_py
    if name == "compiled":
        if _compiled is None:
            raise ImportError("compiled kernel extension is not built")
        return _compiled
    raise ValueError(f"unknown kernel backend {name!r}")
