"""Kernel backend selection.

The compiled extension is used when it imports; set MARKEDKH_PURE=1 to force
the pure-Python implementation.
"""
import os

from . import _pykernels as pure

if os.environ.get("MARKEDKH_PURE"):
    impl = pure
else:
    try:
        from . import _ckernels as impl
    except ImportError:  # extension not built
        impl = pure

BACKEND = "python" if impl is pure else "compiled"

resolve_cube = impl.resolve_cube
map_pairs = impl.map_pairs
reduce_columns = impl.reduce_columns
