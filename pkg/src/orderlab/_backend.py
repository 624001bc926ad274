"""Pick the compiled kernels when available, else the pure-Python twin."""

import os

if os.environ.get("ORDERLAB_PURE", "") not in ("", "0"):
    from . import _pykernels as kernels

    NAME = "python"
else:
    try:
        from . import _kernels as kernels

        NAME = "cython"
    except ImportError:
        from . import _pykernels as kernels

        NAME = "python"

__all__ = ["kernels", "NAME"]
