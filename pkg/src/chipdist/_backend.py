"""Backend selection for the hot kernels.

Numba is used when importable unless ``CHIPDIST_DISABLE_NUMBA`` is set to a
truthy value, in which case the pure-numpy kernels are used instead.  The
choice is made once at import time.
"""
import os

_FLAG = os.environ.get("CHIPDIST_DISABLE_NUMBA", "").strip().lower()
DISABLED_BY_ENV = _FLAG not in ("", "0", "false", "no")

try:
    import numba  # noqa: F401

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and not DISABLED_BY_ENV

if USE_NUMBA:
    from . import _kernels_numba as kernels
else:
    from . import _kernels_numpy as kernels

BACKEND = "numba" if USE_NUMBA else "numpy"

__all__ = ["BACKEND", "HAVE_NUMBA", "USE_NUMBA", "kernels"]
