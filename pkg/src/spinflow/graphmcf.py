"""Mean-curvature flow: graph form, parametric normal flow, dissipation laws.

The graph flow evolves phi(r1, r2, t) by

    phi_t = [(1+p2^2) p11 + (1+p1^2) p22 - 2 p1 p2 p12] / W^2
            + xi1 p1 + xi2 p2 - xi3,

the parametric flow moves a surface jet by r_t = H n - xi (+ anisotropic
drift), and the dissipation report measures the evolution laws that the
flows imply for sqrt(g) and H.
"""

from dataclasses import dataclass, field

import numpy as np

from spinflow.errors import BlowUp, InsufficientHistory
from spinflow.spin import anisotropy_velocity
from spinflow.stencils import diff, diff_nonperiodic
from spinflow.surface import (build_graph_jet, curvatures,
                              fundamental_forms, jet_from_embedding,
                              laplace_beltrami, tr_k_squared)


@dataclass(frozen=True)
class GraphState:
    """Graph height field with flow time and constant drift."""

    phi: np.ndarray
    t: float
    xi: tuple = (0.0, 0.0, 0.0)


def mcf_graph_rhs(state, grid, order=2, xi_field=None):
    """Right-hand side of the drifted graph MCF.

    ``xi_field`` optionally supplies a per-node (3, ny, nx) drift in place
    of the constant ``state.xi``.
    """
    gj = build_graph_jet(state.phi, grid, order)
    W2 = 1.0 + gj.p1**2 + gj.p2**2
    curv = ((1.0 + gj.p2**2) * gj.p11 + (1.0 + gj.p1**2) * gj.p22
            - 2.0 * gj.p1 * gj.p2 * gj.p12) / W2
    if xi_field is not None:
        x1, x2, x3 = xi_field[0], xi_field[1], xi_field[2]
    else:
        x1, x2, x3 = state.xi
    return curv + x1 * gj.p1 + x2 * gj.p2 - x3


@dataclass
class GraphTrajectory:
    grid: object
    times: list = field(default_factory=list)
    phis: list = field(default_factory=list)

    def append(self, t, phi):
        self.times.append(t)
        self.phis.append(phi.copy())


def mcf_evolve(state, grid, dt, n_steps, stride=1, order=2,
               ceiling_grad=1e3, ceiling_rate=1e6, xi_field=None):
    """RK4 trajectory of the graph flow; quasilinear-parabolic CFL guard."""
    guard = 0.2 * min(grid.hx, grid.hy) ** 2
    if dt > guard:
        raise ValueError(f"dt = {dt:.3e} violates the guard 0.2*min(h)^2 = {guard:.3e}")
    if n_steps % stride:
        raise ValueError("n_steps must be a multiple of stride")
    traj = GraphTrajectory(grid=grid)
    phi = np.array(state.phi, dtype=np.float64, copy=True)
    t = state.t
    traj.append(t, phi)

    def rhs(p):
        return mcf_graph_rhs(GraphState(phi=p, t=t, xi=state.xi), grid, order,
                             xi_field)

    for i in range(n_steps):
        k1 = rhs(phi)
        gmax = max(np.abs(diff(phi, grid, "x", 1, order)).max(),
                   np.abs(diff(phi, grid, "y", 1, order)).max())
        if gmax > ceiling_grad or np.abs(k1).max() > ceiling_rate:
            raise BlowUp(t, "graph MCF ceiling crossed", trajectory=traj)
        k2 = rhs(phi + 0.5 * dt * k1)
        k3 = rhs(phi + 0.5 * dt * k2)
        k4 = rhs(phi + dt * k3)
        phi = phi + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.all(np.isfinite(phi)):
            raise BlowUp(t, "non-finite graph state", trajectory=traj)
        t = state.t + (i + 1) * dt
        if (i + 1) % stride == 0:
            traj.append(t, phi)
    return traj


def parametric_normal_flow_rhs(jet, xi=(0.0, 0.0, 0.0), J=None, order=2,
                               g_floor=1e-10):
    """r_t = H n - xi, plus the anisotropic drift V when J is given.

    V solves V_x = r_x ^ (J r_x) by x-quadrature; for isotropic J the term
    vanishes identically.
    """
    forms = fundamental_forms(jet, g_floor)
    H, _ = curvatures(forms)
    rt = H[None] * forms.normal - np.asarray(xi, dtype=float)[:, None, None]
    if J is not None:
        rt = rt + anisotropy_velocity(jet.r_x, jet.grid, J, order)
    return rt


@dataclass
class SurfaceTrajectory:
    """Stored surface jets of a parametric run (equal time spacing)."""

    grid: object
    dt_save: float
    times: list = field(default_factory=list)
    jets: list = field(default_factory=list)

    def append(self, t, jet):
        self.times.append(t)
        self.jets.append(jet)

    def __len__(self):
        return len(self.jets)


def parametric_mcf_evolve(r0, grid, dt, n_steps, stride=1, order=2,
                          xi=(0.0, 0.0, 0.0), J=None, slope3=None,
                          g_floor=1e-10, ceiling_rate=1e6):
    """Evolve a periodic embedded surface under r_t = H n - xi.

    ``r0``: (3, ny, nx) periodic positions (plus optional secular slope).
    Snapshots are stored every ``stride`` steps as full jets.
    """
    guard = 0.2 * min(grid.hx, grid.hy) ** 2
    if dt > guard:
        raise ValueError(f"dt = {dt:.3e} violates the guard 0.2*min(h)^2 = {guard:.3e}")
    if n_steps % stride:
        raise ValueError("n_steps must be a multiple of stride")

    def rhs(r):
        jet = jet_from_embedding(r, grid, order, slope3)
        return parametric_normal_flow_rhs(jet, xi, J, order, g_floor)

    traj = SurfaceTrajectory(grid=grid, dt_save=dt * stride)
    r = np.array(r0, dtype=np.float64, copy=True)
    t = 0.0
    traj.append(t, jet_from_embedding(r, grid, order, slope3))
    for i in range(n_steps):
        k1 = rhs(r)
        if np.abs(k1).max() > ceiling_rate:
            raise BlowUp(t, "parametric MCF ceiling crossed", trajectory=traj)
        k2 = rhs(r + 0.5 * dt * k1)
        k3 = rhs(r + 0.5 * dt * k2)
        k4 = rhs(r + dt * k3)
        r = r + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t = (i + 1) * dt
        if (i + 1) % stride == 0:
            traj.append(t, jet_from_embedding(r, grid, order, slope3))
    return traj


def general_gf_rhs(jet, u, M_field=None, xi=(0.0, 0.0, 0.0), g_floor=1e-10):
    """The general normal-speed flow r_t = M n - xi + u r_x.

    ``M_field=None`` selects M = H (mean curvature); otherwise a
    user-supplied scalar field sets the normal speed.
    """
    forms = fundamental_forms(jet, g_floor)
    if M_field is None:
        M_field, _ = curvatures(forms)
    return (M_field[None] * forms.normal
            - np.asarray(xi, dtype=float)[:, None, None]
            + u[None] * jet.r_x)


def total_area(jet, g_floor=1e-10):
    """Discrete surface area: sum of sqrt(g) times the cell area."""
    forms = fundamental_forms(jet, g_floor)
    return float(forms.sqrt_g.sum() * jet.grid.hx * jet.grid.hy)


def dissipation_residuals(traj, order=2, g_floor=1e-10):
    """Residuals of the MCF evolution laws along a stored trajectory.

    For pure MCF (xi = 0) the flow implies, with A = Tr(K^2):

        res1 = (ln sqrt g)_t + H^2
        res2 = H_t - (Lap_g H + A H)
        res3 = (ln sqrt g)_tt + 2 H Lap_g H + 2 A H^2
        res4 = (sqrt g)_tt - [-2 H Lap_g H - 2 A H^2 + H^4] sqrt g

    Time derivatives are central differences over the stored levels;
    residuals are evaluated and reported on the interior levels only.
    Returns a dict of per-residual max and L2 norms.
    """
    if len(traj) < 3:
        raise InsufficientHistory(f"need >= 3 stored levels, got {len(traj)}")
    dt = traj.dt_save
    forms = [fundamental_forms(j, g_floor) for j in traj.jets]
    grid = traj.grid
    sq = np.stack([f.sqrt_g for f in forms])
    lnsq = np.log(sq)
    H = np.stack([curvatures(f)[0] for f in forms])
    lap = np.stack([laplace_beltrami(curvatures(f)[0], f, grid, order)
                    for f in forms])
    A = np.stack([tr_k_squared(f) for f in forms])

    lnsq_t = diff_nonperiodic(lnsq, dt, axis=0, degree=1)
    lnsq_tt = diff_nonperiodic(lnsq, dt, axis=0, degree=2)
    sq_tt = diff_nonperiodic(sq, dt, axis=0, degree=2)
    H_t = diff_nonperiodic(H, dt, axis=0, degree=1)

    sl = slice(1, -1)  # interior time levels
    res = {
        "log_area_rate": lnsq_t[sl] + H[sl] ** 2,
        "mean_curvature_rate": H_t[sl] - (lap[sl] + A[sl] * H[sl]),
        "log_area_accel": lnsq_tt[sl] + 2.0 * H[sl] * lap[sl] + 2.0 * A[sl] * H[sl] ** 2,
        "area_density_accel": sq_tt[sl] - (-2.0 * H[sl] * lap[sl]
                                           - 2.0 * A[sl] * H[sl] ** 2
                                           + H[sl] ** 4) * sq[sl],
    }
    report = {}
    for name, r in res.items():
        report[name] = {
            "max_norm": float(np.abs(r).max()),
            "l2_norm": float(np.sqrt((r**2).mean())),
        }
    return report


def inverse_metric_rate_residual(traj, order=2, g_floor=1e-10):
    """Check g^{ij}_t = +2 H K^{ij} along a pure-MCF trajectory.

    K^{ij} = g^{ik} g^{jl} K_kl; returns the max norm over interior levels.
    """
    if len(traj) < 3:
        raise InsufficientHistory(f"need >= 3 stored levels, got {len(traj)}")
    dt = traj.dt_save
    ginv = []
    HKup = []
    for jet in traj.jets:
        f = fundamental_forms(jet, g_floor)
        g11, g12, g22 = f.G / f.g, -f.F / f.g, f.E / f.g
        H, _ = curvatures(f)
        b = np.stack([np.stack([f.L, f.M]), np.stack([f.M, f.N])])
        gi = np.stack([np.stack([g11, g12]), np.stack([g12, g22])])
        kup = np.einsum("ik...,jl...,kl...->ij...", gi, gi, b)
        ginv.append(gi)
        HKup.append(2.0 * H[None, None] * kup)
    ginv = np.stack(ginv)
    HKup = np.stack(HKup)
    gi_t = diff_nonperiodic(ginv, dt, axis=0, degree=1)
    r = gi_t[1:-1] - HKup[1:-1]
    return float(np.abs(r).max())
