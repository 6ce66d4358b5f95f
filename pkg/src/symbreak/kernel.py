"""Kernel selection: the compiled extension when importable, else pure Python.

Set SYMBREAK_PURE=1 to force the pure-Python kernel.
"""

import os

if os.environ.get("SYMBREAK_PURE"):
    from . import _kernel_py as _impl
else:
    try:
        from . import _kernel as _impl  # compiled at install time
    except ImportError:
        from . import _kernel_py as _impl

BACKEND = _impl.BACKEND
NogoodEngine = _impl.NogoodEngine
refine_partition = _impl.refine_partition


def available_backends():
    """Names of kernels importable in this environment."""
    names = ["python"]
    try:
        from . import _kernel  # noqa: F401
        names.insert(0, "c")
    except ImportError:
        pass
    return names
