"""Stencil kernel backend selection.

The hot grid sweeps exist twice: numba-compiled node loops in
``_kernels_numba`` and a vectorized pure-numpy gather path in
``_kernels_numpy``. The environment variable ``KE_BACKEND`` picks one at
import time:

* ``auto`` (default): numba when importable, numpy otherwise
* ``numba``: require numba, fail loudly if it is missing
* ``numpy``: force the fallback path

Both backends implement identical semantics; ``benchmarks/bench_backends.py``
compares their throughput.
"""

import os

from .errors import ConfigError

_requested = os.environ.get("KE_BACKEND", "auto").strip().lower()
if _requested not in ("auto", "numba", "numpy"):
    raise ConfigError(
        f"KE_BACKEND must be one of auto|numba|numpy, got {_requested!r}"
    )

try:
    import numba  # noqa: F401

    HAS_NUMBA = True
except ImportError:
    HAS_NUMBA = False

if _requested == "numba" and not HAS_NUMBA:
    raise ConfigError("KE_BACKEND=numba but numba is not importable")

USE_NUMBA = HAS_NUMBA if _requested == "auto" else _requested == "numba"

if USE_NUMBA:
    from . import _kernels_numba as kernels
else:
    from . import _kernels_numpy as kernels


def backend_name() -> str:
    return "numba" if USE_NUMBA else "numpy"


__all__ = ["kernels", "backend_name", "USE_NUMBA", "HAS_NUMBA"]
