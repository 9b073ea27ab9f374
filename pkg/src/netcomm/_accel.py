"""Numba/NumPy lane selection for the hot kernels.

The env var NETCOMM_NUMBA picks the lane at import time:

  * unset or "auto" -- use numba when it imports, else pure NumPy
  * "0", "off", "false" -- force the pure-NumPy lane
  * "1", "on", "true" -- require numba; ImportError if unavailable

Both lanes execute the same kernel source, so results are bit-identical;
only speed differs.  NETCOMM_THREADS caps numba's thread pool (the kernels
are single-threaded, so this only matters if numba's runtime spawns
workers for other reasons).
"""

import os

_FALSY = {"0", "off", "false", "no"}
_TRUTHY = {"1", "on", "true", "yes"}


def _resolve_lane() -> bool:
    raw = os.environ.get("NETCOMM_NUMBA", "auto").strip().lower()
    if raw in _FALSY:
        return False
    if raw in _TRUTHY:
        import numba  # noqa: F401  -- fail loudly if explicitly requested

        return True
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


NUMBA_ENABLED = _resolve_lane()


def _apply_thread_cap() -> None:
    raw = os.environ.get("NETCOMM_THREADS", "").strip()
    if not raw or not NUMBA_ENABLED:
        return
    try:
        cap = max(1, int(raw))
    except ValueError:
        return
    import numba

    try:
        numba.set_num_threads(min(cap, numba.get_num_threads()))
    except ValueError:
        pass


_apply_thread_cap()


def jit_kernel(func):
    """Compile `func` with numba on the numba lane; return it unchanged otherwise."""
    if not NUMBA_ENABLED:
        return func
    from numba import njit

    return njit(cache=True)(func)


def backend_name() -> str:
    return "numba" if NUMBA_ENABLED else "numpy"
