"""Select the curvature kernel backend at import.

The compiled extension is used when it was built; otherwise the numpy
reference implementation.  ``EMGR_BACKEND=python`` forces the fallback.
"""

import os

import numpy as np

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py

if os.environ.get("EMGR_BACKEND", "").lower() != "python":
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py


def _c(x):
    return np.ascontiguousarray(x, dtype=float)


def connection(ginv, dg, h, dh, d2h, gbar, dgbar):
    """Connection difference D^l_{mq} and its partials d_k D^l_{mq}."""
    return _impl.connection(*(_c(x) for x in (ginv, dg, h, dh, d2h, gbar, dgbar)))


def riemann(gbar, d, dd):
    """Riemann tensor R^r_{s m v}, antisymmetric in (m, v) by construction."""
    return _impl.riemann(_c(gbar), _c(d), _c(dd))
