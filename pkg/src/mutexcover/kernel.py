"""Covering-kernel selection: compiled extension if available, else pure Python.

Set MUTEXCOVER_PURE=1 to force the pure backend.
"""

from __future__ import annotations

import os

from . import _kernelpy

if os.environ.get("MUTEXCOVER_PURE"):
    _impl = _kernelpy
else:
    try:
        from . import _kernelc as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _kernelpy

grow_vertex_set = _impl.grow_vertex_set
BACKEND = _impl.BACKEND_NAME


def available_backends():
    """Names of importable kernel backends."""
    names = ["python"]
    try:
        from . import _kernelc  # noqa: F401

        names.append("cython")
    except ImportError:
        pass
    return names


def get_backend(name: str):
    """Fetch a specific backend module ('python' or 'cython')."""
    if name == "python":
        return _kernelpy
    if name == "cython":
        from . import _kernelc

        return _kernelc
    raise ValueError(f"unknown kernel backend {name!r}")
