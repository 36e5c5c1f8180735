"""Periodic 2D grid container.

Array layout convention used throughout the package:

* scalar fields are ``(ny, nx)`` float arrays, x fastest (row-major),
* 3-vector fields are ``(3, ny, nx)``,
* 2x2 complex matrix fields are ``(ny, nx, 2, 2)``.

Node ``(j, i)`` sits at ``(x0 + i*hx, y0 + j*hy)``; both directions are
periodic with periods ``Lx``, ``Ly``.
"""

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class Grid2D:
    """Uniform periodic grid on ``[x0, x0+Lx) x [y0, y0+Ly)``.

    ``nx`` and ``ny`` must be even (the Fourier-diagonalized solvers pair
    modes) and at least 8 (widest stencil plus margin).
    """

    nx: int
    ny: int
    Lx: float
    Ly: float
    x0: float = 0.0
    y0: float = 0.0

    def __post_init__(self):
        if self.nx < 8 or self.ny < 8:
            raise ValueError(f"grid must have nx, ny >= 8, got {self.nx}x{self.ny}")
        if self.nx % 2 or self.ny % 2:
            raise ValueError(f"grid must have even nx, ny, got {self.nx}x{self.ny}")
        if self.Lx <= 0 or self.Ly <= 0:
            raise ValueError("grid periods must be positive")

    @property
    def hx(self):
        return self.Lx / self.nx

    @property
    def hy(self):
        return self.Ly / self.ny

    @property
    def x(self):
        """x coordinates, shape (nx,)."""
        return self.x0 + self.hx * np.arange(self.nx)

    @property
    def y(self):
        """y coordinates, shape (ny,)."""
        return self.y0 + self.hy * np.arange(self.ny)

    def meshgrid(self):
        """Return (X, Y), each shaped (ny, nx)."""
        return np.meshgrid(self.x, self.y, indexing="xy")

    @property
    def shape(self):
        return (self.ny, self.nx)

    def refine(self, factor=2):
        """Grid with the same domain and ``factor`` times the resolution."""
        return Grid2D(self.nx * factor, self.ny * factor, self.Lx, self.Ly,
                      self.x0, self.y0)

    def kx(self):
        """Angular wavenumbers along x for a full FFT, shape (nx,)."""
        return 2.0 * np.pi * np.fft.fftfreq(self.nx, d=self.hx)

    def ky(self):
        """Angular wavenumbers along y for a full FFT, shape (ny,)."""
        return 2.0 * np.pi * np.fft.fftfreq(self.ny, d=self.hy)

    def to_dict(self):
        return {"nx": self.nx, "ny": self.ny, "Lx": self.Lx, "Ly": self.Ly,
                "x0": self.x0, "y0": self.y0}

    @classmethod
    def from_dict(cls, d):
        return cls(**d)
