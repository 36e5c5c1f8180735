"""Pure-numpy implementations of the hot kernels.

These mirror the API of the compiled extension ``spinflow._stencils`` and are
selected automatically when the extension is unavailable (or when
``SPINFLOW_FORCE_NUMPY=1``).  All derivative kernels act on the trailing two
axes of C-contiguous float64 arrays with periodic wraparound; leading axes
(vector components, stacked snapshots) broadcast through.
"""

import numpy as np

BACKEND_NAME = "numpy"


def _sh(f, n, axis):
    """f shifted so that out[i] = f[i+n] with periodic wrap."""
    return np.roll(f, -n, axis=axis)


def diff1_ord2(f, h, axis):
    return (_sh(f, 1, axis) - _sh(f, -1, axis)) / (2.0 * h)


def diff2_ord2(f, h, axis):
    return (_sh(f, 1, axis) - 2.0 * f + _sh(f, -1, axis)) / (h * h)


def diff1_ord4(f, h, axis):
    return (
        -_sh(f, 2, axis) + 8.0 * _sh(f, 1, axis)
        - 8.0 * _sh(f, -1, axis) + _sh(f, -2, axis)
    ) / (12.0 * h)


def diff2_ord4(f, h, axis):
    return (
        -_sh(f, 2, axis) + 16.0 * _sh(f, 1, axis) - 30.0 * f
        + 16.0 * _sh(f, -1, axis) - _sh(f, -2, axis)
    ) / (12.0 * h * h)


def cross3(a, b):
    """Pointwise cross product of (3, ...) vector fields."""
    out = np.empty_like(a)
    out[0] = a[1] * b[2] - a[2] * b[1]
    out[1] = a[2] * b[0] - a[0] * b[2]
    out[2] = a[0] * b[1] - a[1] * b[0]
    return out


def dot3(a, b):
    """Pointwise dot product of (3, ...) vector fields."""
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def norm3(a):
    """Pointwise Euclidean norm of a (3, ...) vector field."""
    return np.sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2])


def normalize3(a, out=None):
    """Pointwise a / |a|.  Caller is responsible for degeneracy checks."""
    n = norm3(a)
    if out is None:
        out = np.empty_like(a)
    np.divide(a, n[None, :, :], out=out)
    return out
