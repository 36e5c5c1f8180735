"""Kernel backend selection.

At import time we try the compiled Cython extension and fall back to the
numpy implementation.  Setting ``SPINFLOW_FORCE_NUMPY=1`` in the environment
forces the fallback (used by the benchmark and the backend-equivalence
tests).
"""

import os

if os.environ.get("SPINFLOW_FORCE_NUMPY") == "1":
    from spinflow import _stencils_py as kernels
else:
    try:
        from spinflow import _stencils as kernels  # type: ignore[attr-defined]
    except ImportError:
        from spinflow import _stencils_py as kernels

BACKEND = kernels.BACKEND_NAME

diff1_ord2 = kernels.diff1_ord2
diff2_ord2 = kernels.diff2_ord2
diff1_ord4 = kernels.diff1_ord4
diff2_ord4 = kernels.diff2_ord4
cross3 = kernels.cross3
dot3 = kernels.dot3
norm3 = kernels.norm3
normalize3 = kernels.normalize3
