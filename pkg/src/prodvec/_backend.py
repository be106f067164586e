"""Kernel backend selection.

Imports the compiled extension when it is built, otherwise the pure
numpy fallback.  Set PRODVEC_PURE=1 to force the fallback (used by the
benchmark and by tests that compare the two paths).
"""

from __future__ import annotations

import os

from . import _purekernels

if os.environ.get("PRODVEC_PURE"):
    kernels = _purekernels
else:
    try:
        from . import _kernels as kernels  # type: ignore[no-redef]
    except ImportError:
        kernels = _purekernels

BACKEND = kernels.BACKEND_NAME
MAX_INT64_N = kernels.MAX_INT64_N

ryser_permanent = kernels.ryser_permanent
batch_permanent = kernels.batch_permanent
find_vanishing = kernels.find_vanishing
