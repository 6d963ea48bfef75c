"""Kernel backend selection.

The compiled ``_ckernels`` extension is used when importable; otherwise the
numpy implementations in ``_pykernels``.  Set ``PURECODE_PURE_PYTHON=1`` to
force the fallback.
"""

import os

from . import _pykernels

if os.environ.get("PURECODE_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl
    except ImportError:
        _impl = _pykernels

BACKEND = "python" if _impl is _pykernels else "cython"

block_entropy = _impl.block_entropy
sample_block = _impl.sample_block
sample_code_block = _impl.sample_code_block
decode_scan = _impl.decode_scan


def available_backends():
    """Map of backend name to kernel module for every importable backend."""
    found = {"python": _pykernels}
    try:
        from . import _ckernels
    except ImportError:
        pass
    else:
        found["cython"] = _ckernels
    return found
