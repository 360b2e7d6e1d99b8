"""Kernel selection.

The compiled extension is used when it imports cleanly; setting
``BETAWEIBULL_PURE=1`` forces the pure-Python kernels.
"""

import os

if os.environ.get("BETAWEIBULL_PURE", "") not in ("", "0"):
    from . import _pykernels as kernels
else:
    try:
        from . import _kernels as kernels
    except ImportError:  # extension not built
        from . import _pykernels as kernels

BACKEND = "compiled" if kernels.IS_COMPILED else "python"


def get_kernels(name):
    """Return the kernel module ``"compiled"`` or ``"python"`` explicitly."""
    if name == "python":
        from . import _pykernels
        return _pykernels
    if name == "compiled":
        from . import _kernels
        return _kernels
    raise ValueError(f"unknown backend {name!r}")
