"""Reduced ordered BDDs.

The compiled kernel is used when it was built; setting ``DQCOUNT_PURE=1``
forces the pure-Python kernel.
"""
from __future__ import annotations

import os

if os.environ.get("DQCOUNT_PURE") == "1":
    from ._kernel_py import Kernel
else:
    try:
        from ._kernel import Kernel
    except ImportError:
        from ._kernel_py import Kernel

from .manager import DdManager, Function, DdError

KERNEL_COMPILED = bool(Kernel.compiled)

__all__ = ["DdManager", "Function", "DdError", "Kernel", "KERNEL_COMPILED"]
