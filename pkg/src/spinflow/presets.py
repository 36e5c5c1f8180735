"""Named initial-condition presets.

Spin presets return (3, ny, nx) unit fields (or (3, nx) for x-only data);
scalar presets return (ny, nx) arrays.  Random presets require a seed --
reproducibility is part of the product contract.
"""

import numpy as np

from spinflow.vecalg import normalize


def constant_spin(grid, direction=(0.0, 0.0, 1.0)):
    d = np.asarray(direction, dtype=float)
    d = d / np.linalg.norm(d)
    S = np.empty((3, grid.ny, grid.nx))
    S[0], S[1], S[2] = d[0], d[1], d[2]
    return S


def magnon_profile(x, theta, k, phase=0.0):
    """Precessing spin wave S = (sin t cos p, sin t sin p, cos t), p = k x + phase.

    An exact solution of the Heisenberg-ferromagnet flow once the phase
    advances as ``k x - k^2 cos(theta) y``.
    """
    p = k * x + phase
    st, ct = np.sin(theta), np.cos(theta)
    return np.stack([st * np.cos(p), st * np.sin(p), np.full_like(p, ct)])


def magnon_spin(grid, theta, k_mode, phase=0.0):
    """Magnon over the full grid (y-independent); k = 2*pi*k_mode/Lx."""
    k = 2.0 * np.pi * k_mode / grid.Lx
    row = magnon_profile(grid.x, theta, k, phase)
    return np.broadcast_to(row[:, None, :], (3, grid.ny, grid.nx)).copy()


def magnon_exact(grid_x, theta, k, y):
    """The magnon at evolution parameter y (HF flow, phase k x - k^2 cos(theta) y)."""
    return magnon_profile(grid_x, theta, k, phase=-k * k * np.cos(theta) * y)


def band_limited_scalar(grid, kmax, amplitude, seed):
    """Random real field with Fourier content only on modes |kx|,|ky| <= kmax.

    Normalized to the requested max amplitude; deterministic in the seed.
    """
    rng = np.random.default_rng(seed)
    X, Y = grid.meshgrid()
    f = np.zeros(grid.shape)
    for kx in range(0, kmax + 1):
        for ky in range(-kmax, kmax + 1):
            if kx == 0 and ky <= 0:
                continue
            a, b = rng.normal(size=2)
            ph = 2.0 * np.pi * (kx * (X - grid.x0) / grid.Lx + ky * (Y - grid.y0) / grid.Ly)
            f += a * np.cos(ph) + b * np.sin(ph)
    m = np.abs(f).max()
    if m > 0:
        f *= amplitude / m
    return f


def fourier_mode(grid, kx_mode, ky_mode, amplitude=1.0, phase=0.0):
    X, Y = grid.meshgrid()
    ph = 2.0 * np.pi * (kx_mode * (X - grid.x0) / grid.Lx
                        + ky_mode * (Y - grid.y0) / grid.Ly) + phase
    return amplitude * np.cos(ph)


def _transverse_mean_free_profile(grid, kmax, amplitude, seed):
    """Unit x-profile (3, nx) whose S1, S2 x-means vanish exactly.

    The zero transverse mean keeps the reconstructed surface slope
    y-independent after twisting, which the periodic surface machinery
    requires, and it is preserved by the Myrzakulov-I flow (the right-hand
    side is an exact x-derivative).
    """
    rng = np.random.default_rng(seed)
    x = grid.x
    p = np.zeros((2, grid.nx))
    for k in range(1, kmax + 1):
        for c in range(2):
            a, b = rng.normal(size=2)
            ph = 2.0 * np.pi * k * (x - grid.x0) / grid.Lx
            p[c] += a * np.cos(ph) + b * np.sin(ph)
    m = np.abs(p).max()
    if m > 0:
        p *= amplitude / m
    s = np.stack([p[0], p[1], np.ones_like(x)])
    for _ in range(100):
        s = s / np.sqrt((s**2).sum(axis=0))[None]
        s[0] -= s[0].mean()
        s[1] -= s[1].mean()
    s = s / np.sqrt((s**2).sum(axis=0))[None]
    return s


def twisted_spin(grid, kmax=3, amplitude=0.2, seed=0, m_twist=1):
    """Random smooth spin data S(x, y) = R_z(2*pi*m_twist*y/Ly) * profile(x).

    The rigid z-twist of a transverse-mean-free x-profile gives genuinely
    2D data whose Myrzakulov-I constraint is solvable (row means at
    truncation level) at t = 0.
    """
    s = _transverse_mean_free_profile(grid, kmax, amplitude, seed)
    mu = 2.0 * np.pi * m_twist / grid.Ly
    ang = mu * (grid.y - grid.y0)
    C, Sn = np.cos(ang)[:, None], np.sin(ang)[:, None]
    S = np.empty((3, grid.ny, grid.nx))
    S[0] = C * s[0][None, :] - Sn * s[1][None, :]
    S[1] = Sn * s[0][None, :] + C * s[1][None, :]
    S[2] = np.broadcast_to(s[2], (grid.ny, grid.nx))
    return S


def random_smooth_spin(grid, kmax=3, amplitude=0.2, seed=0, m_twist=1):
    """Alias used by the CLI preset table: see twisted_spin."""
    return twisted_spin(grid, kmax, amplitude, seed, m_twist)


def sphere_cap(grid, rho0=1.0, s_blend=0.9, s_flat=0.985):
    """Sphere graph of radius rho0 blended C^2 to a constant plane.

    The cap is exact for planar radius s <= s_blend*rho0 and constant
    beyond s_flat*rho0, with a quintic smoothstep between.  The sphere is
    centered at height 0, so the apex height equals the sphere radius.
    """
    X, Y = grid.meshgrid()
    s = np.sqrt(X**2 + Y**2)
    s1, s2 = s_blend * rho0, s_flat * rho0
    sph = np.sqrt(np.maximum(rho0**2 - np.minimum(s, s2) ** 2, 0.0))
    base = np.sqrt(rho0**2 - s2**2)
    t = np.clip((s - s1) / (s2 - s1), 0.0, 1.0)
    w = 1.0 - (10 * t**3 - 15 * t**4 + 6 * t**5)
    return w * sph + (1.0 - w) * base


def normalized_spin(base, perturbation):
    """normalize(base + perturbation) for building custom spin data."""
    return normalize(base + perturbation)
