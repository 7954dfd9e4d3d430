"""Hot-loop backend selection.

The compiled extension is used when it imports; otherwise the pure-Python
twin.  Set ``HYPBILLIARDS_PURE=1`` to force the fallback.
"""

import os

from . import _pykernels

BACKEND = "python"
if os.environ.get("HYPBILLIARDS_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl

        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels
else:
    _impl = _pykernels

CuspEscape = _pykernels.CuspEscape
cyclic_length = _impl.cyclic_length
coordinate_descent = _impl.coordinate_descent

__all__ = ["BACKEND", "CuspEscape", "cyclic_length", "coordinate_descent"]
