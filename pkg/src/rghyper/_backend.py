"""Kernel backend selected at import.

The compiled extension is used when it was built; otherwise the numpy
fallback. ``RGHYPER_BACKEND=python`` forces the fallback.
"""
import logging
import os

from rghyper import _pykernels

log = logging.getLogger(__name__)

_NAMES = ("uf_roots", "all_pair_sqdist", "kruskal_sweep", "bottleneck_prim", "radius_pairs")


def _load():
    if os.environ.get("RGHYPER_BACKEND", "").lower() == "python":
        return _pykernels
    try:
        from rghyper import _ckernels
    except ImportError:
        log.debug("compiled kernels unavailable, using the python fallback")
        return _pykernels
    return _ckernels


kernels = _load()
BACKEND = kernels.BACKEND


def use(name):
    """Switch backend at runtime ("cython" or "python"); returns the old name."""
    global kernels, BACKEND
    old = BACKEND
    if name == "python":
        kernels = _pykernels
    elif name == "cython":
        from rghyper import _ckernels
        kernels = _ckernels
    else:
        raise ValueError(f"unknown backend {name!r}")
    BACKEND = kernels.BACKEND
    return old


def available():
    names = ["python"]
    try:
        from rghyper import _ckernels  # noqa: F401
        names.insert(0, "cython")
    except ImportError:
        pass
    return names
