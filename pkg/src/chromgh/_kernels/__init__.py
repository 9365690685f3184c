"""Kernel backend selection.

Prefers the compiled Cython extension; falls back to the pure-Python
implementations.  CHROMGH_FORCE_PURE=1 forces the fallback (used by the
benchmark and the backend-agreement tests).
"""
import os

from . import _pure

if os.environ.get("CHROMGH_FORCE_PURE") == "1":
    _impl = _pure
else:
    try:
        from . import _speed as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _pure

BACKEND = _impl.BACKEND
reduce_columns = _impl.reduce_columns
pair_search = _impl.pair_search
