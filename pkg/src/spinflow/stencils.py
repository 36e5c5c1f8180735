"""Finite-difference and spectral derivatives on periodic grids.

The stencil orders follow the package-wide convention: order 2 for
evolution right-hand sides, order 4 for verification tasks, and
``"spectral"`` (exact differentiation of the trigonometric interpolant) for
identity checks whose tolerances sit below any reachable truncation error.
"""

import numpy as np

from spinflow import backend
from spinflow.errors import GridTooSmall

#: number of nodes a centered stencil touches along its axis
STENCIL_WIDTH = {2: 3, 4: 5}

VALID_ORDERS = (2, 4, "spectral")

_AXIS = {"x": -1, "y": -2}


def _check(grid, axis, order):
    if order not in VALID_ORDERS:
        raise ValueError(f"order must be one of {VALID_ORDERS}, got {order!r}")
    n = grid.nx if axis == "x" else grid.ny
    if order != "spectral" and n < STENCIL_WIDTH[order]:
        raise GridTooSmall(
            f"axis {axis}: {n} nodes < stencil width {STENCIL_WIDTH[order]}"
        )
    return n


def spectral_diff(f, grid, axis="x", degree=1):
    """Derivative of the trigonometric interpolant of ``f``.

    The Nyquist mode is zeroed for odd degrees (its derivative has no
    real-signal representation on the grid).
    """
    ax = _AXIS[axis]
    n = grid.nx if axis == "x" else grid.ny
    h = grid.hx if axis == "x" else grid.hy
    k = 2.0 * np.pi * np.fft.rfftfreq(n, d=h)
    fh = np.fft.rfft(f, axis=ax)
    sym = (1j * k) ** degree
    if degree % 2 == 1 and n % 2 == 0:
        sym[-1] = 0.0
    shape = [1] * fh.ndim
    shape[ax] = fh.shape[ax]
    return np.fft.irfft(fh * sym.reshape(shape), n=n, axis=ax)


def diff(f, grid, axis="x", degree=1, order=2):
    """Periodic derivative of ``f`` along ``axis``.

    Parameters
    ----------
    f : ndarray, shape (..., ny, nx)
    grid : Grid2D
    axis : {"x", "y"}
    degree : {1, 2}
    order : {2, 4, "spectral"}
    """
    if degree not in (1, 2):
        raise ValueError(f"degree must be 1 or 2, got {degree}")
    _check(grid, axis, order)
    if order == "spectral":
        return spectral_diff(f, grid, axis, degree)
    ax = _AXIS[axis]
    h = grid.hx if axis == "x" else grid.hy
    f = np.ascontiguousarray(f, dtype=np.float64)
    if degree == 1:
        kern = backend.diff1_ord2 if order == 2 else backend.diff1_ord4
    else:
        kern = backend.diff2_ord2 if order == 2 else backend.diff2_ord4
    return kern(f, h, ax)


def diff_xy(f, grid, order=2):
    """Mixed second derivative d^2 f / dx dy (the 1D stencils commute)."""
    return diff(diff(f, grid, "x", 1, order), grid, "y", 1, order)


def diff_nonperiodic(f, h, axis=0, degree=1):
    """Second-order derivative along a non-periodic axis (stored time levels).

    Central differences in the interior, one-sided second-order stencils at
    the two boundary levels.  Needs at least 3 (degree 1) or 4 (degree 2)
    levels.
    """
    f = np.moveaxis(np.asarray(f, dtype=np.float64), axis, 0)
    n = f.shape[0]
    need = 3 if degree == 1 else 4
    if n < need:
        raise GridTooSmall(f"need >= {need} levels for degree {degree}, got {n}")
    out = np.empty_like(f)
    if degree == 1:
        out[1:-1] = (f[2:] - f[:-2]) / (2.0 * h)
        out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h)
        out[-1] = (3.0 * f[-1] - 4.0 * f[-2] + f[-3]) / (2.0 * h)
    elif degree == 2:
        out[1:-1] = (f[2:] - 2.0 * f[1:-1] + f[:-2]) / (h * h)
        out[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / (h * h)
        out[-1] = (2.0 * f[-1] - 5.0 * f[-2] + 4.0 * f[-3] - f[-4]) / (h * h)
    else:
        raise ValueError(f"degree must be 1 or 2, got {degree}")
    return np.moveaxis(out, 0, axis)


def diff1_symbol(k, h, order):
    """Fourier symbol s(k) of the first-derivative operator, as i*s_imag.

    Returns the real array ``s_imag`` with operator symbol ``1j * s_imag``;
    zeros mark the operator's null modes (k = 0, and Nyquist for the
    centered stencils).
    """
    if order == "spectral":
        return np.asarray(k, dtype=float).copy()
    th = np.asarray(k) * h
    if order == 2:
        return np.sin(th) / h
    if order == 4:
        return (8.0 * np.sin(th) - np.sin(2.0 * th)) / (6.0 * h)
    raise ValueError(f"unknown order {order!r}")


def diff2_symbol(k, h, order):
    """Fourier symbol of the second-derivative operator (real, <= 0)."""
    if order == "spectral":
        return -np.asarray(k, dtype=float) ** 2
    th = np.asarray(k) * h
    if order == 2:
        return (2.0 * np.cos(th) - 2.0) / (h * h)
    if order == 4:
        return (-2.0 * np.cos(2.0 * th) + 32.0 * np.cos(th) - 30.0) / (12.0 * h * h)
    raise ValueError(f"unknown order {order!r}")
