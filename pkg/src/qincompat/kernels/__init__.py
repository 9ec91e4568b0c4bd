"""Backend dispatch for the hot numeric kernels.

The jit backend is used when numba imports cleanly; setting the
environment variable ``QINCOMPAT_DISABLE_NUMBA`` to 1/true/yes selects
the pure-numpy fallback instead.  Both backends implement the same
counter-based contracts and agree to floating-point noise.
"""

from __future__ import annotations

import os

from . import numpy_backend
from .numpy_backend import CHUNK, KIND_GENERAL, KIND_SECTION

_ENV_FLAG = "QINCOMPAT_DISABLE_NUMBA"


def _numba_disabled() -> bool:
    return os.environ.get(_ENV_FLAG, "").strip().lower() in {"1", "true", "yes", "on"}


if _numba_disabled():
    _active = numpy_backend
else:
    try:
        from . import numba_backend as _active  # noqa: F401
    except ImportError:
        _active = numpy_backend


def active_backend():
    """Module implementing the kernel contracts for this process."""
    return _active


def backend_name() -> str:
    return _active.NAME


def set_threads(n: int) -> int:
    """Request a worker count; returns the count actually applied."""
    return _active.set_threads(n)
