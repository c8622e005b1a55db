"""Kernel backend selection: numba-compiled or plain NumPy.

The env var ``GATSP_BACKEND`` picks the implementation of the hot kernels in
:mod:`gatsp.kernels`:

* ``numba`` -- require numba, compile kernels with ``@njit``.
* ``numpy`` -- run the same functions uncompiled (pure NumPy/Python).
* ``auto`` / unset -- use numba when importable, else fall back.

Both paths execute identical code and consume identical PCG64 streams, so
results are bit-for-bit equal; only speed differs.
"""

import os

_ENV_VAR = "GATSP_BACKEND"


def _resolve() -> str:
    requested = os.environ.get(_ENV_VAR, "auto").strip().lower() or "auto"
    if requested == "numpy":
        return "numpy"
    if requested == "numba":
        import numba  # noqa: F401  (raise ImportError if unavailable)

        return "numba"
    if requested == "auto":
        try:
            import numba  # noqa: F401
        except ImportError:
            return "numpy"
        return "numba"
    raise ValueError(
        f"invalid {_ENV_VAR}={requested!r}: expected 'numba', 'numpy' or 'auto'"
    )


BACKEND = _resolve()

if BACKEND == "numba":
    from numba import njit

    def jit(fn):
        return njit(cache=True, nogil=True)(fn)

else:

    def jit(fn):
        return fn
