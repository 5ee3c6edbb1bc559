"""Stepping-kernel selection: compiled extension if available, numpy
fallback otherwise.

Set ``LFCSIM_PURE_PYTHON=1`` in the environment to force the fallback (used
by the benchmark and the kernel-equivalence tests).  ``BACKEND`` reports
which implementation is active.
"""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("LFCSIM_PURE_PYTHON"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _stepkernels as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

lfc_loop = _impl.lfc_loop
rk4_lti_loop = _impl.rk4_lti_loop

__all__ = ["lfc_loop", "rk4_lti_loop", "BACKEND"]
