"""Nonlocal constraint solvers: x-antiderivative and the hyperbolic solver.

Both are diagonal in Fourier space on the periodic grid.  The antiderivative
supports two inversions:

* ``match_order=None`` divides by the exact symbol ``ik`` (most accurate
  reconstruction of the continuum antiderivative), and
* ``match_order`` in ``{2, 4, "spectral"}`` divides by the symbol of the
  corresponding first-derivative stencil, so that applying that stencil to
  the result returns the integrand (minus its row mean) to machine
  precision.  Flow right-hand sides use this variant to keep constraint
  residuals at rounding level.
"""

import numpy as np

from spinflow.errors import NonzeroMean, ResonantMode, SecularGrowth
from spinflow.stencils import diff1_symbol, diff2_symbol


def row_means_x(f):
    """Mean over x per y-row, shape f.shape[:-1]."""
    return f.mean(axis=-1)


def antiderivative_x(f, grid, tol_mean=1e-10, match_order=None):
    """Solve F_x = f - <f>_x per y-row, with zero x-mean gauge.

    Parameters
    ----------
    f : ndarray (..., ny, nx)
    tol_mean : float
        Solvability tolerance: every y-row of ``f`` must have |x-mean|
        below this, else ``SecularGrowth`` identifies the worst row.
    match_order : None, 2, 4, or "spectral"
        None inverts the exact derivative symbol; a stencil order inverts
        that stencil's symbol (see module docstring).
    """
    means = row_means_x(f)
    amax = np.abs(means)
    if amax.max() > tol_mean:
        # report the worst row of the worst leading component
        idx = np.unravel_index(int(np.argmax(amax)), amax.shape)
        raise SecularGrowth(idx[-1], float(means[idx]))

    n = grid.nx
    k = 2.0 * np.pi * np.fft.rfftfreq(n, d=grid.hx)
    s = diff1_symbol(k, grid.hx, "spectral" if match_order is None else match_order)
    inv = np.zeros_like(s)
    nz = np.abs(s) > 1e-300
    inv[nz] = 1.0 / s[nz]
    inv[0] = 0.0
    if n % 2 == 0:
        inv[-1] = 0.0  # Nyquist is a null mode of every centered stencil

    fh = np.fft.rfft(f, axis=-1)
    shape = [1] * fh.ndim
    shape[-1] = inv.size
    Fh = fh * (inv.reshape(shape) / 1j)
    return np.fft.irfft(Fh, n=n, axis=-1)


def solve_hyperbolic_constraint(rho, grid, alpha2, tol_mean=1e-10,
                                tol_resonant=1e-10, order="spectral"):
    """Solve u_xx - alpha2 * u_yy = rho on the periodic grid.

    The operator is diagonalized by the 2D DFT; modes on the characteristic
    cone kx^2 = alpha2 * ky^2 are null.  ``rho`` must carry no energy there
    (relative to ||rho||), and its double mean must vanish.  The returned u
    has zero double mean.

    ``order`` selects which discrete symbol is inverted; the default exact
    symbol gives a spectrally accurate solution for smooth sources.
    """
    rho = np.asarray(rho, dtype=np.float64)
    rh = np.fft.fft2(rho)
    nrm = np.sqrt((np.abs(rh) ** 2).mean())  # ~ ||rho||_2 scale
    scale = max(nrm, 1e-300)

    if abs(rh[0, 0]) / rho.size > tol_mean * max(1.0, np.abs(rho).max()):
        raise NonzeroMean(
            f"double mean {rh[0, 0].real / rho.size:.3e} exceeds tolerance"
        )

    kx = grid.kx()[None, :]
    ky = grid.ky()[:, None]
    sym = diff2_symbol(kx, grid.hx, order) - alpha2 * diff2_symbol(ky, grid.hy, order)

    null = np.abs(sym) <= 1e-12 * (1.0 + kx**2 + abs(alpha2) * ky**2)
    null[0, 0] = True
    bad = null & (np.abs(rh) > tol_resonant * scale * rho.size)
    bad[0, 0] = False
    if bad.any():
        jj, ii = np.nonzero(bad)
        kxi = int(np.rint(grid.kx()[ii[0]] * grid.Lx / (2 * np.pi)))
        kyi = int(np.rint(grid.ky()[jj[0]] * grid.Ly / (2 * np.pi)))
        raise ResonantMode(kxi, kyi, float(np.abs(rh[jj[0], ii[0]])) / rho.size)

    inv = np.zeros_like(sym)
    inv[~null] = 1.0 / sym[~null]
    return np.real(np.fft.ifft2(rh * inv))
