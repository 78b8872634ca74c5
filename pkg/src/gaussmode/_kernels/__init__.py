"""Hot kernels with a compiled core and a pure Python fallback.

The Cython module is used when it was built; otherwise, or when the
environment variable ``GAUSSMODE_PURE_PYTHON`` is set to a non-empty value,
the pure Python twin is selected.  ``BACKEND`` names the active one.
"""
import importlib
import os

from . import _pykernels

_NAMES = ("bose", "ftilde_minus", "bisect_root", "cond_det_grid")


def load_backend(name: str):
    """Return the kernel module for ``"cython"`` or ``"python"``."""
    if name == "python":
        return _pykernels
    if name == "cython":
        return importlib.import_module("gaussmode._kernels._ckernels")
    raise ValueError(f"unknown backend {name!r}")


def available_backends() -> list[str]:
    out = ["python"]
    try:
        load_backend("cython")
    except ImportError:
        pass
    else:
        out.insert(0, "cython")
    return out


if os.environ.get("GAUSSMODE_PURE_PYTHON"):
    _impl = _pykernels
else:
    try:
        _impl = load_backend("cython")
    except ImportError:
        _impl = _pykernels

BACKEND = "cython" if _impl is not _pykernels else "python"

bose = _impl.bose
ftilde_minus = _impl.ftilde_minus
bisect_root = _impl.bisect_root
cond_det_grid = _impl.cond_det_grid

__all__ = ["BACKEND", "load_backend", "available_backends", *_NAMES]
