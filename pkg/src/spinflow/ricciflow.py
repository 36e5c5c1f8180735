"""2D Ricci flows in conformal gauge, plain / normalized / coupled.

With g_ij = exp(2 phi) delta_ij the scalar curvature is
R = -2 exp(-2 phi) Lap(phi) and the flows reduce to scalar equations:

    plain:       phi_t = -R/2
    normalized:  phi_t = (<R> - R)/2,   <R> = (int R dA)/(int dA)
    coupled:     phi_t = -R/2 + (beta u + alpha R)/2, with a scalar field
                 u driven by u_t = Lap_g(u + k R) (first order) or
                 u_tt = Lap_g(u + k R) (second order, integrated in (u, u_t)).

An optional symmetric-tensor forcing callback adds the undetermined
anisotropic term; it defaults to zero and no concrete form is invented.
"""

from dataclasses import dataclass, field, replace

import numpy as np

from spinflow.errors import BlowUp
from spinflow.stencils import diff


@dataclass(frozen=True)
class ConformalMetric2D:
    """Metric exp(2 phi) (dx^2 + dy^2) at flow time t."""

    phi: np.ndarray
    t: float = 0.0


@dataclass(frozen=True)
class CoupledRFState:
    """Conformal factor plus scalar field (and its rate, when second order)."""

    phi: np.ndarray
    u: np.ndarray
    u_t: np.ndarray = None
    t: float = 0.0
    alpha: float = 0.0
    beta: float = 1.0
    k: float = 0.0


def flat_laplacian(f, grid, order=2):
    return diff(f, grid, "x", 2, order) + diff(f, grid, "y", 2, order)


def conformal_scalar_curvature(phi, grid, order=2):
    """R = -2 exp(-2 phi) Lap(phi)."""
    return -2.0 * np.exp(-2.0 * phi) * flat_laplacian(phi, grid, order)


def volume_element(phi, grid):
    """dA per node: exp(2 phi) hx hy."""
    return np.exp(2.0 * phi) * grid.hx * grid.hy


def total_volume(phi, grid):
    return float(volume_element(phi, grid).sum())


def total_curvature(phi, grid, order=2):
    """int R dA; identically the flat-Laplacian sum, so ~0 on the torus."""
    R = conformal_scalar_curvature(phi, grid, order)
    return float((R * volume_element(phi, grid)).sum())


def mean_curvature_average(phi, grid, order=2):
    """<R> = (int R dA) / (int dA)."""
    dA = volume_element(phi, grid)
    R = conformal_scalar_curvature(phi, grid, order)
    return float((R * dA).sum() / dA.sum())


def conformal_rf_rhs(m, grid, normalized=False, order=2, forcing=None):
    """phi_t for the plain or normalized conformal Ricci flow.

    ``forcing(phi, grid)``, when given, must return the symmetric-tensor
    forcing contracted into the conformal gauge as a scalar rate addition
    (zero by default; the undetermined anisotropic term).
    """
    R = conformal_scalar_curvature(m.phi, grid, order)
    rate = -0.5 * R
    if normalized:
        dA = volume_element(m.phi, grid)
        rate = rate + 0.5 * float((R * dA).sum() / dA.sum())
    if forcing is not None:
        rate = rate + forcing(m.phi, grid)
    return rate


@dataclass
class RFTrajectory:
    grid: object
    times: list = field(default_factory=list)
    phis: list = field(default_factory=list)
    volumes: list = field(default_factory=list)
    total_curvatures: list = field(default_factory=list)

    def append(self, t, phi, grid, order):
        self.times.append(t)
        self.phis.append(phi.copy())
        self.volumes.append(total_volume(phi, grid))
        self.total_curvatures.append(total_curvature(phi, grid, order))


def _rf_guard(dt, grid, phi):
    limit = 0.2 * min(grid.hx, grid.hy) ** 2 * float(np.exp(2.0 * phi.min()))
    if dt > limit:
        raise ValueError(
            f"dt = {dt:.3e} violates the metric-scaled guard {limit:.3e}"
        )


def rf_evolve(m, grid, dt, n_steps, stride=1, normalized=False, order=2,
              ceiling=1e6, forcing=None):
    """RK4 trajectory of the plain/normalized conformal Ricci flow."""
    _rf_guard(dt, grid, m.phi)
    if n_steps % stride:
        raise ValueError("n_steps must be a multiple of stride")
    traj = RFTrajectory(grid=grid)
    phi = np.array(m.phi, dtype=np.float64, copy=True)
    t = m.t
    traj.append(t, phi, grid, order)

    def rhs(p):
        return conformal_rf_rhs(ConformalMetric2D(phi=p, t=t), grid,
                                normalized, order, forcing)

    for i in range(n_steps):
        k1 = rhs(phi)
        if np.abs(k1).max() > ceiling or np.abs(phi).max() > ceiling:
            raise BlowUp(t, "Ricci flow ceiling crossed", trajectory=traj)
        k2 = rhs(phi + 0.5 * dt * k1)
        k3 = rhs(phi + 0.5 * dt * k2)
        k4 = rhs(phi + dt * k3)
        phi = phi + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t = m.t + (i + 1) * dt
        if (i + 1) % stride == 0:
            traj.append(t, phi, grid, order)
    return traj


VARIANTS = ("7.3", "7.4", "7.5", "7.6")
SECOND_ORDER_VARIANTS = ("7.3", "7.5")


def coupled_rf_rhs(state, grid, variant="7.4", order=2, metric_laplacian=True,
                   freeze_metric=False):
    """Rates (phi_t, u_t, u_tt-or-None) of the coupled metric + field system.

    Variants "7.3"/"7.4" fix beta = 1, alpha = 0; "7.5"/"7.6" use the
    state's (alpha, beta).  "7.3"/"7.5" drive u at second order (the state
    must carry u_t), "7.4"/"7.6" at first order.  The field operator is the
    Laplace-Beltrami operator of the evolving conformal metric
    (exp(-2 phi) Lap) by default; ``metric_laplacian=False`` selects the
    flat Laplacian reading instead.
    """
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")
    alpha, beta = (0.0, 1.0) if variant in ("7.3", "7.4") else (state.alpha, state.beta)
    R = conformal_scalar_curvature(state.phi, grid, order)
    phi_t = -0.5 * R + 0.5 * (beta * state.u + alpha * R)
    if freeze_metric:
        phi_t = np.zeros_like(phi_t)
    lap = flat_laplacian(state.u + state.k * R, grid, order)
    if metric_laplacian:
        lap = np.exp(-2.0 * state.phi) * lap
    if variant in SECOND_ORDER_VARIANTS:
        if state.u_t is None:
            raise ValueError(f"variant {variant} needs u_t in the state")
        return phi_t, state.u_t, lap
    return phi_t, lap, None


def coupled_rf_step(state, grid, dt, variant="7.4", order=2,
                    metric_laplacian=True, freeze_metric=False):
    """One RK4 step of the coupled system, metric-scaled stability guard."""
    _rf_guard(dt, grid, state.phi)

    second = variant in SECOND_ORDER_VARIANTS

    def pack(s):
        return (s.phi, s.u, s.u_t) if second else (s.phi, s.u)

    def rates(vec):
        st = replace(state, phi=vec[0], u=vec[1],
                     u_t=vec[2] if second else None)
        r = coupled_rf_rhs(st, grid, variant, order, metric_laplacian,
                           freeze_metric)
        return r if second else r[:2]

    y = pack(state)
    k1 = rates(y)
    k2 = rates(tuple(a + 0.5 * dt * b for a, b in zip(y, k1)))
    k3 = rates(tuple(a + 0.5 * dt * b for a, b in zip(y, k2)))
    k4 = rates(tuple(a + dt * b for a, b in zip(y, k3)))
    out = tuple(a + dt / 6.0 * (b1 + 2 * b2 + 2 * b3 + b4)
                for a, b1, b2, b3, b4 in zip(y, k1, k2, k3, k4))
    if not all(np.all(np.isfinite(o)) for o in out):
        raise BlowUp(state.t, "coupled Ricci flow produced non-finite fields")
    return replace(state, phi=out[0], u=out[1],
                   u_t=out[2] if second else None, t=state.t + dt)


def coupled_rf_evolve(state, grid, dt, n_steps, variant="7.4", order=2,
                      metric_laplacian=True, freeze_metric=False, stride=1):
    """Repeated coupled_rf_step with snapshots; returns (times, states)."""
    times, states = [state.t], [state]
    s = state
    for i in range(n_steps):
        s = coupled_rf_step(s, grid, dt, variant, order, metric_laplacian,
                            freeze_metric)
        if (i + 1) % stride == 0:
            times.append(s.t)
            states.append(s)
    return times, states
