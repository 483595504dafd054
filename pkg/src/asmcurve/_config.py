"""Runtime switches.

``ASMCURVE_NUMBA=0`` forces the pure-numpy kernels even when numba imports.
"""
import os

try:
    import numba  # noqa: F401

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and os.environ.get("ASMCURVE_NUMBA", "1").lower() not in ("0", "false", "no", "off")

numba_default = {
    "nogil": True,
    "cache": True,
    "fastmath": False,
    "boundscheck": False,
}

# default budgets
MAX_FIELD_BITS = 12
MAX_CLOSURE = 10**6
MAX_PRECISION_DOUBLINGS = 3
MAX_STABILIZER_CANDIDATES = 10**8
AFFINE_SAMPLE_FULL = 512
AFFINE_SAMPLE_SIZE = 64
MAX_ENUM = 2 * 10**5
MAX_LIFT_PAIRS = 10**5
