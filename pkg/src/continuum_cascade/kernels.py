"""Kernel backend selection.

Prefers the compiled Cython extension and falls back to the numpy
implementation when the extension is not built.  Set
CONTINUUM_CASCADE_KERNEL=python (or =compiled) to force a backend;
forcing "compiled" raises if the extension is missing rather than
silently degrading.
"""

import os

from .errors import ConfigurationError

_forced = os.environ.get("CONTINUUM_CASCADE_KERNEL", "").strip().lower()

if _forced == "python":
    from . import _kernels_py as _impl

    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        if _forced == "compiled":
            raise ConfigurationError(
                "CONTINUUM_CASCADE_KERNEL=compiled but the extension is not built"
            )
        from . import _kernels_py as _impl

        BACKEND = "python"

step_riemann = _impl.step_riemann
step_trapezoid = _impl.step_trapezoid
