"""Finite-difference Christoffel symbols and Ricci tensors.

Dimension-generic machinery over gridded metric samples; the 2D route is
the independent oracle for the conformal identity Ric = (R/2) g, and the 3D
route provides the diagnostic Ricci tensor of the (x, y, t) metric built
from flow trajectories.
"""

import numpy as np

from spinflow.errors import DegenerateMetric
from spinflow.stencils import diff, diff_nonperiodic


def christoffel_symbols(g, derivs):
    """Gamma^c_ab = g^{cd} (d_a g_bd + d_b g_ad - d_d g_ab) / 2.

    Parameters
    ----------
    g : ndarray (d, d, *shape)
        Metric components over the grid.
    derivs : sequence of d callables
        derivs[a](field) returns d_a of a (*shape) field.

    Returns
    -------
    Gamma : ndarray (d, d, d, *shape), index order [c, a, b].
    """
    d = g.shape[0]
    shape = g.shape[2:]
    det, ginv = _invert_metric(g)
    dg = np.empty((d, d, d) + shape)
    for a in range(d):
        for i in range(d):
            for j in range(i, d):
                dg[a, i, j] = derivs[a](g[i, j])
                dg[a, j, i] = dg[a, i, j]
    low = np.empty_like(dg)  # Gamma_{d,ab} with index order [d, a, b]
    for c in range(d):
        for a in range(d):
            for b in range(d):
                low[c, a, b] = 0.5 * (dg[a, b, c] + dg[b, a, c] - dg[c, a, b])
    return np.einsum("cd...,dab...->cab...", ginv, low), ginv, det


def _invert_metric(g):
    d = g.shape[0]
    shape = g.shape[2:]
    mat = np.moveaxis(g.reshape(d, d, -1), -1, 0)          # (n, d, d)
    det = np.linalg.det(mat)
    bad = np.abs(det) < 1e-14
    if bad.any():
        flat = int(np.argmax(bad))
        node = (tuple(int(i) for i in np.unravel_index(flat, shape))
                if shape else ())
        raise DegenerateMetric(node, float(det[flat]))
    inv = np.linalg.inv(mat)
    return det.reshape(shape), np.moveaxis(inv, 0, -1).reshape((d, d) + shape)


def ricci_tensor(g, derivs):
    """Ricci tensor R_ab by finite differences, symmetrized.

    R_ab = d_c Gamma^c_ab - d_b Gamma^c_ac + Gamma^c_cd Gamma^d_ab
           - Gamma^c_bd Gamma^d_ac.
    """
    d = g.shape[0]
    shape = g.shape[2:]
    Gamma, ginv, _ = christoffel_symbols(g, derivs)
    trace = np.einsum("cca...->a...", Gamma)    # Gamma^c_ca = Gamma^c_ac
    R = np.zeros((d, d) + shape)
    for a in range(d):
        for b in range(d):
            term = np.zeros(shape)
            for c in range(d):
                term += derivs[c](Gamma[c, a, b])
            term -= derivs[b](trace[a])
            for e in range(d):
                term += trace[e] * Gamma[e, a, b]
                for c in range(d):
                    term -= Gamma[c, b, e] * Gamma[e, a, c]
            R[a, b] = term
    R = 0.5 * (R + np.swapaxes(R, 0, 1))
    return R, ginv


def scalar_curvature(g, derivs):
    """R = g^{ab} R_ab."""
    R_ab, ginv = ricci_tensor(g, derivs)
    return np.einsum("ab...,ab...->...", ginv, R_ab)


def metric_2d(E, F, G):
    """Stack (E, F; F, G) as a (2, 2, ny, nx) array."""
    return np.stack([np.stack([E, F]), np.stack([F, G])])


def derivs_2d(grid, order=2, y_mode="periodic"):
    """Derivative callables (d_x, d_y) for 2D metric fields.

    ``y_mode="sampled"`` differences y non-periodically, for metrics read
    off assembled 1+1-flow trajectories whose rows are time samples.
    """
    if y_mode == "periodic":
        dy = lambda f: diff(f, grid, "y", 1, order)
    elif y_mode == "sampled":
        dy = lambda f: diff_nonperiodic(f, grid.hy, axis=-2, degree=1)
    else:
        raise ValueError(f"unknown y_mode {y_mode!r}")
    return (lambda f: diff(f, grid, "x", 1, order), dy)


def ricci_2d(E, F, G, grid, order=2, y_mode="periodic"):
    """Direct FD Ricci tensor of a 2D metric, shape (2, 2, ny, nx)."""
    return ricci_tensor(metric_2d(E, F, G), derivs_2d(grid, order, y_mode))[0]


def scalar_curvature_2d(E, F, G, grid, order=2, y_mode="periodic"):
    """Direct FD scalar curvature of a 2D metric."""
    return scalar_curvature(metric_2d(E, F, G), derivs_2d(grid, order, y_mode))


def derivs_3d(grid, dt, order=2):
    """Derivative callables (d_x, d_y, d_t) over (nt, ny, nx) samples.

    x and y are periodic; t uses interior-central / one-sided stencils over
    the stored levels.
    """
    return (
        lambda f: diff(f, grid, "x", 1, order),
        lambda f: diff(f, grid, "y", 1, order),
        lambda f: diff_nonperiodic(f, dt, axis=0, degree=1),
    )
