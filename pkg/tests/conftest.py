import numpy as np
import pytest

from spinflow.grid import Grid2D


@pytest.fixture
def grid():
    return Grid2D(64, 64, 2 * np.pi, 2 * np.pi)


@pytest.fixture
def small_grid():
    return Grid2D(32, 32, 2 * np.pi, 2 * np.pi)


def torus_embedding(grid, R=1.6, rho=0.6):
    X, Y = grid.meshgrid()
    return np.stack([
        (R + rho * np.cos(X)) * np.cos(Y),
        (R + rho * np.cos(X)) * np.sin(Y),
        rho * np.sin(X),
    ])


def torus_curvatures(grid, R=1.6, rho=0.6):
    """Closed-form H (trace convention) and K for the torus chart."""
    X, _ = grid.meshgrid()
    k1 = 1.0 / rho
    k2 = np.cos(X) / (R + rho * np.cos(X))
    return k1 + k2, k1 * k2
