"""Backend selection for the numeric hot loops.

The compiled extension wins where per-row work is small and call overhead
dominates (1-dim probe features, shallow projection removal); the NumPy
fallback rides BLAS and wins on wide problems.  Dispatch is by input
shape, with measured crossover thresholds, so each problem instance runs
one backend deterministically.  Set ``PCDISSECT_PURE=1`` to force the
NumPy implementations everywhere (the kernel benchmark does this to time
both sides).
"""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("PCDISSECT_PURE"):
    _compiled = None
else:
    try:
        from . import _ckernels as _compiled
    except ImportError:
        _compiled = None

BACKEND = "cython" if _compiled is not None else "numpy"

# measured crossovers vs OpenBLAS on x86-64; beyond these the matmul path wins
_MAX_COMPILED_WIDTH = 24   # classifier feature columns incl. bias
_MAX_COMPILED_DEPTH = 8    # removed components per row


def logreg_loss_grad(xb, y, w):
    if _compiled is not None and xb.shape[1] <= _MAX_COMPILED_WIDTH:
        return _compiled.logreg_loss_grad(xb, y, w)
    return _kernels_py.logreg_loss_grad(xb, y, w)


def logreg_loss(xb, y, w):
    if _compiled is not None and xb.shape[1] <= _MAX_COMPILED_WIDTH:
        return _compiled.logreg_loss(xb, y, w)
    return _kernels_py.logreg_loss(xb, y, w)


def remove_projections(x, u):
    if _compiled is not None and 0 < u.shape[1] <= _MAX_COMPILED_DEPTH:
        return _compiled.remove_projections(x, u)
    return _kernels_py.remove_projections(x, u)
