"""Pointwise vector algebra on (3, ny, nx) fields."""

import numpy as np

from spinflow import backend
from spinflow.errors import DegenerateVector

cross = backend.cross3
dot = backend.dot3
norm = backend.norm3


def triple(a, b, c):
    """Scalar triple product a . (b ^ c)."""
    return dot(a, cross(b, c))


def normalize(a):
    """a / |a| pointwise; raises DegenerateVector below norm 1e-13."""
    n = norm(a)
    nmin = n.min()
    if nmin < 1e-13:
        node = tuple(int(i) for i in np.unravel_index(int(np.argmin(n)), n.shape))
        raise DegenerateVector(node, float(nmin))
    return a / n[None]
