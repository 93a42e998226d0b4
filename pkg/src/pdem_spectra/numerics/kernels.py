"""Kernel backend selection.

The compiled extension is used when it imports; set ``PDEM_SPECTRA_PURE=1``
to force the pure-Python implementation.
"""
import os

from . import _pykernels

BACKENDS = {"python": _pykernels}

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None
else:
    BACKENDS["cython"] = _ckernels

if os.environ.get("PDEM_SPECTRA_PURE") or _ckernels is None:
    BACKEND = "python"
else:
    BACKEND = "cython"

_impl = BACKENDS[BACKEND]
sturm_count = _impl.sturm_count
bisect = _impl.bisect
solve_shifted = _impl.solve_shifted


def get(name: str):
    """The kernel module for ``name`` ("cython" or "python")."""
    try:
        return BACKENDS[name]
    except KeyError:
        raise ValueError(f"kernel backend {name!r} not available") from None
