"""Kernel selection: compiled extension if importable, numpy otherwise.

Set ``MCGSHADOW_PURE=1`` to force the numpy fallback.
"""

import os

if os.environ.get("MCGSHADOW_PURE") == "1":
    from . import _pykernels as impl
else:
    try:
        from . import _kernels as impl
    except ImportError:  # extension not built
        from . import _pykernels as impl

BACKEND = impl.BACKEND
compose = impl.compose
invert = impl.invert
is_identity = impl.is_identity
schreier_tree = impl.schreier_tree
strip = impl.strip
coset_rep = impl.coset_rep
orbit_partition = impl.orbit_partition
