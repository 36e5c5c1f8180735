"""Induced-metric evolution laws of the Myrzakulov-I flow.

In the arclength gauge E = 1 the flow drives the first fundamental form by

    E_t = 0
    F_t = (F M - N) F_x / sqrt(g) - L_y sqrt(g) + u F_x + u_y
    G_t = (F M - N) G_x / sqrt(g) - 2 M_y sqrt(g) + u G_x + 2 F u_y
    g_t = G_t - 2 F F_t
        = g_x (F M - N)/sqrt(g) - 2 sqrt(g) (M_y - F L_y) + u g_x,

and the flow vector decomposes in the surface frame as

    r_x ^ r_xy + u r_x = (M F/sqrt(g) + u) r_x - (M/sqrt(g)) r_y
                         + (G_x / 2 sqrt(g)) n,
    u_x = (L G_x - 2 M F_x) / (2 sqrt(g)).

Both identities follow from the Gauss-Weingarten frame equations in the
arclength gauge; they are exposed as rate evaluators and residual
reports, with a trajectory-differencing comparison as the oracle.
"""

from dataclasses import dataclass

import numpy as np

from spinflow.errors import InsufficientHistory
from spinflow.stencils import diff, diff_nonperiodic
from spinflow.surface import fundamental_forms, jet_from_spin
from spinflow.vecalg import cross


def mi_metric_rhs(forms, u, grid, order=2, gauge_tol=1e-6):
    """Rates (E_t, F_t, G_t, g_t) of the induced metric under the M-I flow.

    Requires the E = 1 gauge.  g_t is defined through the determinant
    identity g_t = G_t - 2 F F_t (exact by construction); the re-differenced
    closed form is returned alongside with its truncation-level gap.
    """
    if np.abs(forms.E - 1.0).max() > gauge_tol:
        raise ValueError("mi_metric_rhs requires the E = 1 gauge")
    F, G, g, sq = forms.F, forms.G, forms.g, forms.sqrt_g
    L, M, N = forms.L, forms.M, forms.N
    Fx = diff(F, grid, "x", 1, order)
    Gx = diff(G, grid, "x", 1, order)
    gx = diff(g, grid, "x", 1, order)
    Ly = diff(L, grid, "y", 1, order)
    My = diff(M, grid, "y", 1, order)
    uy = diff(u, grid, "y", 1, order)
    E_t = np.zeros_like(F)
    F_t = (F * M - N) * Fx / sq - Ly * sq + u * Fx + uy
    G_t = (F * M - N) * Gx / sq - 2.0 * My * sq + u * Gx + 2.0 * F * uy
    g_t = G_t - 2.0 * F * F_t
    # the closed form re-differences g, so it agrees only to truncation
    g_t_closed = gx * (F * M - N) / sq - 2.0 * sq * (My - F * Ly) + u * gx
    return {"E_t": E_t, "F_t": F_t, "G_t": G_t, "g_t": g_t,
            "g_t_closed": g_t_closed,
            "closed_form_gap": float(np.abs(g_t - g_t_closed).max())}


@dataclass(frozen=True)
class FrameDecompositionReport:
    """Pointwise residual fields of the frame decomposition identities."""

    vector_residual: np.ndarray   # |lhs - rhs| of the flow decomposition
    ux_residual: np.ndarray       # u_x minus its closed form

    @property
    def max_norms(self):
        return (float(self.vector_residual.max()),
                float(np.abs(self.ux_residual).max()))


def mi_frame_decomposition_residual(jet, u, order=2, g_floor=1e-10):
    """Residuals of the frame decomposition of the M-I flow vector.

    Measures (pointwise Euclidean norm)

        r_x ^ r_xy + u r_x - [(MF/sqrt g + u) r_x - (M/sqrt g) r_y
                              + (G_x/2 sqrt g) n]

    and u_x - (L G_x - 2 M F_x)/(2 sqrt g); both vanish at truncation
    order on arclength-gauge surfaces.
    """
    grid = jet.grid
    forms = fundamental_forms(jet, g_floor)
    F, G, sq = forms.F, forms.G, forms.sqrt_g
    L, M = forms.L, forms.M
    Gx = diff(G, grid, "x", 1, order)
    Fx = diff(F, grid, "x", 1, order)
    lhs = cross(jet.r_x, jet.r_xy) + u[None] * jet.r_x
    rhs = ((M * F / sq + u)[None] * jet.r_x
           - (M / sq)[None] * jet.r_y
           + (Gx / (2.0 * sq))[None] * forms.normal)
    vec = np.sqrt(((lhs - rhs) ** 2).sum(axis=0))
    ux = diff(u, grid, "x", 1, order)
    uxr = ux - (L * Gx - 2.0 * M * Fx) / (2.0 * sq)
    return FrameDecompositionReport(vector_residual=vec, ux_residual=uxr)


def hf_reduction_residual(jet):
    """|r_y - r_x ^ r_xx| on an assembled HF surface (Eq-form of the flow)."""
    return np.sqrt(((jet.r_y - cross(jet.r_x, jet.r_xx)) ** 2).sum(axis=0))


def metric_rate_comparison(traj, order=2, g_floor=1e-10):
    """Formulas (F_t, G_t, g_t) against central time-differences of (F, G, g).

    Needs >= 3 uniformly spaced stored levels; returns max-norm gaps over
    the interior levels, which converge at O(h^order + dt_save^2).
    """
    if len(traj.states) < 3:
        raise InsufficientHistory(
            f"need >= 3 stored levels, got {len(traj.states)}"
        )
    dts = np.diff(traj.times)
    if not np.allclose(dts, dts[0], rtol=1e-12, atol=0):
        raise ValueError("trajectory must be stored at uniform spacing")
    grid = traj.grid
    Fs, Gs, gs, rates = [], [], [], []
    for st in traj.states:
        jet = jet_from_spin(st.S, grid, order)
        forms = fundamental_forms(jet, g_floor)
        Fs.append(forms.F)
        Gs.append(forms.G)
        gs.append(forms.g)
        rates.append(mi_metric_rhs(forms, st.u, grid, order))
    Fs, Gs, gs = np.stack(Fs), np.stack(Gs), np.stack(gs)
    h = dts[0]
    Ft_num = diff_nonperiodic(Fs, h, axis=0, degree=1)
    Gt_num = diff_nonperiodic(Gs, h, axis=0, degree=1)
    gt_num = diff_nonperiodic(gs, h, axis=0, degree=1)
    gaps = {"F_t": 0.0, "G_t": 0.0, "g_t": 0.0, "closed_form_gap": 0.0}
    for idx in range(1, len(traj.states) - 1):
        r = rates[idx]
        gaps["F_t"] = max(gaps["F_t"], float(np.abs(Ft_num[idx] - r["F_t"]).max()))
        gaps["G_t"] = max(gaps["G_t"], float(np.abs(Gt_num[idx] - r["G_t"]).max()))
        gaps["g_t"] = max(gaps["g_t"], float(np.abs(gt_num[idx] - r["g_t"]).max()))
        gaps["closed_form_gap"] = max(gaps["closed_form_gap"], r["closed_form_gap"])
    return gaps
