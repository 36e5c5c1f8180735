"""Spin-flow right-hand sides and state containers.

Flows implemented here (S is a unit 3-vector field):

* Heisenberg ferromagnet:  S_y = S ^ S_xx  (1+1, evolution variable y),
* Myrzakulov-I:            S_t = (S ^ S_y + u S)_x,  u_x = -S.(S_x ^ S_y),
* Ishimori type:           S_t = S ^ (S_xx + a2 S_yy) + u_x S_y + u_y S_x,
                           u_xx - a2 u_yy = -2 a2 S.(S_x ^ S_y),
* anisotropic drift:       V_x = S ^ J S  (componentwise x-quadrature).

All right-hand sides are pure functions; the unit constraint is enforced by
the evolution drivers via pointwise renormalization.
"""

import logging
from dataclasses import dataclass, field, replace

import numpy as np

from spinflow.constraints import antiderivative_x, row_means_x, solve_hyperbolic_constraint
from spinflow.stencils import diff
from spinflow.vecalg import cross, norm, triple

log = logging.getLogger(__name__)

UNIT_TOL = 1e-10


def check_unit(S, tol=UNIT_TOL):
    dev = float(np.abs(norm(S) - 1.0).max())
    if dev > tol:
        raise ValueError(f"spin field is not unit length: max ||S|-1| = {dev:.3e}")
    return dev


def project_unit(S):
    """Pointwise renormalization S / |S|."""
    return S / norm(S)[None]


@dataclass(frozen=True)
class FlowParams:
    """Time-stepping and model parameters shared by the spin flows.

    ``dt`` must respect the diffusion-scaled explicit guard
    ``dt < 0.25 * min(hx, hy)^2`` (checked against the grid by
    :meth:`validate`).
    """

    dt: float
    integrator: str = "rk4"          # "rk4" | "heun"
    project_each_step: bool = True
    order: object = 2                # 2 | 4 | "spectral"
    xi: tuple = (0.0, 0.0, 0.0)
    eta: tuple = (0.0, 0.0, 0.0)
    alpha2: float = 1.0
    J: tuple = (0.0, 0.0, 0.0)
    m_speed: str = "mean_curvature"  # or "user_scalar_field"
    ceiling_rhs: float = 1e6
    ceiling_u: float = 1e6
    constraint_ceiling: float = 1e-4

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.integrator not in ("rk4", "heun"):
            raise ValueError(f"unknown integrator {self.integrator!r}")

    def validate(self, grid):
        guard = 0.25 * min(grid.hx, grid.hy) ** 2
        if self.dt >= guard:
            raise ValueError(
                f"dt = {self.dt:.3e} violates the stability guard "
                f"0.25*min(hx,hy)^2 = {guard:.3e}"
            )
        return self


@dataclass(frozen=True)
class MIState:
    """Myrzakulov-I state: spin field, constraint potential, flow time."""

    S: np.ndarray          # (3, ny, nx)
    u: np.ndarray          # (ny, nx)
    t: float
    constraint_residual: float = 0.0

    def copy_with(self, **kw):
        return replace(self, **kw)


def hf_rhs(S, grid, order=2):
    """S ^ S_xx; pointwise orthogonal to S by construction.

    Works on (3, nx) rows and on (3, ny, nx) fields alike (x is the
    trailing axis either way).
    """
    return cross(S, diff(S, grid, "x", 2, order))


def mi_constraint_density(S, grid, order=2):
    """rho = -S.(S_x ^ S_y), the right-hand side of the u_x constraint."""
    Sx = diff(S, grid, "x", 1, order)
    Sy = diff(S, grid, "y", 1, order)
    return -triple(S, Sx, Sy)


def mi_constraint_u(S, grid, order=2, tol_warn=1e-10, tol_err=1e-6):
    """Solve u_x = -S.(S_x ^ S_y) by x-quadrature, zero x-mean gauge.

    The row means of the integrand measure periodic solvability: above
    ``tol_warn`` a warning is logged, above ``tol_err`` SecularGrowth is
    raised (propagated from the quadrature).
    """
    rho = mi_constraint_density(S, grid, order)
    worst = float(np.abs(row_means_x(rho)).max())
    if worst > tol_warn:
        log.warning("M-I constraint row mean %.3e above %.1e", worst, tol_warn)
    u = antiderivative_x(rho, grid, tol_mean=tol_err,
                         match_order=order)
    return u


def mi_rhs(S, u, grid, order=2):
    """S_t = (S ^ S_y + u S)_x for a consistent (S, u) pair."""
    Sy = diff(S, grid, "y", 1, order)
    W = cross(S, Sy) + u[None] * S
    return diff(W, grid, "x", 1, order)


def mi_rhs_full(S, grid, order=2):
    """Re-solve the constraint and evaluate the M-I right-hand side.

    Returns (S_t, u, worst_row_mean); used per integrator stage so the
    constraint is never lagged.  Solvability is reported, not gated here --
    the evolution driver owns the ConstraintLost ceiling.
    """
    Sx = diff(S, grid, "x", 1, order)
    Sy = diff(S, grid, "y", 1, order)
    rho = -triple(S, Sx, Sy)
    worst = float(np.abs(row_means_x(rho)).max())
    u = antiderivative_x(rho, grid, tol_mean=np.inf, match_order=order)
    W = cross(S, Sy) + u[None] * S
    return diff(W, grid, "x", 1, order), u, worst


def ishimori_constraint_u(S, grid, alpha2, order=2, tol_mean=1e-6):
    """Solve u_xx - alpha2 u_yy = -2 alpha2 S.(S_x ^ S_y).

    The source's double mean sits at truncation level on unit fields (it
    vanishes in the continuum); the solvability tolerance reflects that.
    """
    rho = 2.0 * alpha2 * mi_constraint_density(S, grid, order)
    return solve_hyperbolic_constraint(rho, grid, alpha2, tol_mean=tol_mean,
                                       order=order)


def ishimori_rhs(S, grid, alpha2, order=2, u=None):
    """S_t = S ^ (S_xx + alpha2 S_yy) + u_x S_y + u_y S_x.

    ``u`` may be passed in when already solved for this S; otherwise the
    hyperbolic constraint is solved here.
    """
    if u is None:
        u = ishimori_constraint_u(S, grid, alpha2, order)
    Sxx = diff(S, grid, "x", 2, order)
    Syy = diff(S, grid, "y", 2, order)
    ux = diff(u, grid, "x", 1, order)
    uy = diff(u, grid, "y", 1, order)
    Sx = diff(S, grid, "x", 1, order)
    Sy = diff(S, grid, "y", 1, order)
    return cross(S, Sxx + alpha2 * Syy) + ux[None] * Sy + uy[None] * Sx, u


def anisotropy_velocity(S, grid, J, order=2, tol_mean=1e-8):
    """Drift velocity V with V_x = S ^ (J S), J = diag(J1, J2, J3).

    Solved componentwise by the x-quadrature in the zero x-mean gauge;
    secular row means raise SecularGrowth.
    """
    JS = np.asarray(J, dtype=float)[:, None, None] * S
    W = cross(S, JS)
    return antiderivative_x(W, grid, tol_mean=tol_mean, match_order=order)


def mi_component_rhs(S, u, grid, order=2):
    """Component form of the M-I flow, used as an oracle for mi_rhs.

    This is the component expansion of (S ^ S_y + u S)_x with the
    cross-product index pattern written out explicitly (a transcribed
    version circulates with two slope indices swapped).
    """
    Sy = diff(S, grid, "y", 1, order)
    W = np.empty_like(S)
    W[0] = S[1] * Sy[2] - S[2] * Sy[1] + u * S[0]
    W[1] = S[2] * Sy[0] - S[0] * Sy[2] + u * S[1]
    W[2] = S[0] * Sy[1] - S[1] * Sy[0] + u * S[2]
    return diff(W, grid, "x", 1, order)
