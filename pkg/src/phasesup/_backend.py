"""Backend selection for the hot kernels.

Numba is used when importable unless ``PHASESUP_NUMBA`` is set to one of
``0``, ``false``, ``no`` or ``off``; in that case every kernel runs on its
vectorized numpy path.
"""

import os

try:
    from numba import njit as _njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is an optional accelerator
    HAS_NUMBA = False

    def _njit(*args, **kwargs):
        def decorator(func):
            return func

        return decorator


def _flag_enabled(value):
    return value.strip().lower() not in ("0", "false", "no", "off")


USE_NUMBA = HAS_NUMBA and _flag_enabled(os.environ.get("PHASESUP_NUMBA", "1"))


def njit(func):
    """Compile ``func`` with numba when available, else return it unchanged."""
    return _njit(cache=True, nogil=True)(func)


def backend_name():
    return "numba" if USE_NUMBA else "numpy"
