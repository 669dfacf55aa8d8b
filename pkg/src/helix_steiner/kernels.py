"""Backend selection for the hot loops.

The compiled extension is used when it imports; set
``HELIX_STEINER_PURE_PYTHON=1`` to force the pure-Python fallback.
"""

import os

from . import _pykernels

if os.environ.get("HELIX_STEINER_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl
    except ImportError:
        _impl = _pykernels

BACKEND = "python" if _impl is _pykernels else "cython"

fermat3 = _impl.fermat3
sweep = _impl.sweep
mst_length = _impl.mst_length


def available_backends():
    out = {"python": _pykernels}
    try:
        from . import _ckernels
    except ImportError:
        pass
    else:
        out["cython"] = _ckernels
    return out
