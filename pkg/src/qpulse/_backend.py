"""Kernel backend selection: compiled extension if available, numpy fallback.

Set QPULSE_BACKEND=python (or compiled) to force a choice; the default tries
the compiled extension first.
"""

import os

_choice = os.environ.get("QPULSE_BACKEND", "auto").strip().lower()

if _choice in ("auto", "", "compiled", "cython"):
    try:
        from . import _kernel as _impl
        BACKEND_NAME = "compiled"
    except ImportError:
        if _choice in ("compiled", "cython"):
            raise
        from . import _kernel_py as _impl
        BACKEND_NAME = "python"
elif _choice == "python":
    from . import _kernel_py as _impl
    BACKEND_NAME = "python"
else:
    raise RuntimeError(f"unknown QPULSE_BACKEND value {_choice!r}")

evolve_steps = _impl.evolve_steps
jacobi_eigh = _impl.jacobi_eigh


def backend_name():
    """Name of the kernel implementation selected at import time."""
    return BACKEND_NAME
