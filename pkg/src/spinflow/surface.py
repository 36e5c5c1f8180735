"""Surface reconstruction, fundamental forms, curvatures, and graph formulas.

A moving surface r(x, y) is stored as an optional secular part
``slope3 * x`` plus a doubly periodic part, so that spin fields with
nonzero x-mean reconstruct to well-defined position fields with r_x = S.
"""

from dataclasses import dataclass

import numpy as np

from spinflow.constraints import antiderivative_x
from spinflow.errors import (DegenerateMetric, NegativeDiscriminant,
                             VanishingSlope)
from spinflow.stencils import diff, diff_nonperiodic, diff_xy
from spinflow.vecalg import cross, dot


@dataclass(frozen=True)
class LinearPlusPeriodic:
    """Position field r = slope_rows(y) * x + periodic(x, y).

    ``slope_rows`` holds the per-row x-mean of r_x (3, ny); the periodic
    part has zero x-mean per component and row.
    """

    slope_rows: np.ndarray   # (3, ny)
    periodic: np.ndarray     # (3, ny, nx)

    def __post_init__(self):
        means = np.abs(self.periodic.mean(axis=-1))
        tol = 1e-12 * self.periodic.shape[-1]
        if means.max() > tol:
            raise ValueError(
                f"periodic part has row x-mean {means.max():.3e} > {tol:.1e}"
            )

    def slope_vector(self, tol=1e-6):
        """The slope as a single 3-vector; requires near-y-uniform slope rows.

        Exactly preserved by the flows (their right-hand sides are exact
        x-derivatives); the unit projection injects rounding-level row-mean
        drift along trajectories, so the tolerance sits where the dropped
        secular term is still far below stencil truncation.
        """
        m = self.slope_rows.mean(axis=1)
        dev = np.abs(self.slope_rows - m[:, None]).max()
        if dev > tol:
            raise ValueError(
                f"slope varies along y by {dev:.3e}; the surface has no "
                "periodic-compatible chart"
            )
        return m

    def positions(self, grid):
        """Actual r values (secular part included), shape (3, ny, nx)."""
        return (self.slope_rows[:, :, None] * grid.x[None, None, :]
                + self.periodic)


def reconstruct_position(S, grid, order=2):
    """Integrate r_x = S in x: slope = per-row x-mean of S, rest by quadrature.

    With ``match_order`` quadrature the stencil derivative of the result
    returns S exactly (minus Nyquist content), so the identification
    r_x = S survives discretization.
    """
    slope = S.mean(axis=-1)
    periodic = antiderivative_x(S - slope[..., None], grid,
                                tol_mean=1e-8, match_order=order)
    return LinearPlusPeriodic(slope_rows=slope, periodic=periodic)


@dataclass(frozen=True)
class SurfaceJet:
    """Position field with cached first and second derivatives.

    The position may carry secular parts slope3 * x and slope_y3 * y on
    top of the doubly periodic field (open charts: reconstructed spin
    surfaces, planes, cylinders).  Jets built from spin fields satisfy the
    arclength gauge r_x^2 = 1 (to 1e-8); general embedded surfaces skip
    that check.
    """

    grid: object
    r_periodic: np.ndarray        # (3, ny, nx)
    slope3: np.ndarray            # (3,), x-secular slope
    r_x: np.ndarray
    r_y: np.ndarray
    r_xx: np.ndarray
    r_xy: np.ndarray
    r_yy: np.ndarray
    order: object = 2
    slope_y3: np.ndarray = None   # (3,), y-secular slope (open y-charts)

    def positions(self):
        r = (self.slope3[:, None, None] * self.grid.x[None, None, :]
             + self.r_periodic)
        if self.slope_y3 is not None:
            r = r + self.slope_y3[:, None, None] * self.grid.y[None, :, None]
        return r


def jet_from_embedding(r, grid, order=2, slope3=None, slope_y3=None):
    """Jet of an explicitly given periodic position field (plus secular slopes)."""
    slope3 = np.zeros(3) if slope3 is None else np.asarray(slope3, dtype=float)
    sy = np.zeros(3) if slope_y3 is None else np.asarray(slope_y3, dtype=float)
    r_x = diff(r, grid, "x", 1, order) + slope3[:, None, None]
    r_y = diff(r, grid, "y", 1, order) + sy[:, None, None]
    return SurfaceJet(
        grid=grid, r_periodic=r, slope3=slope3, slope_y3=sy,
        r_x=r_x, r_y=r_y,
        r_xx=diff(r, grid, "x", 2, order),
        r_xy=diff_xy(r, grid, order),
        r_yy=diff(r, grid, "y", 2, order),
        order=order,
    )


def jet_from_spin(S, grid, order=2, gauge_tol=1e-8, y_mode="periodic"):
    """Jet of the surface reconstructed from a unit spin field via r_x = S.

    ``y_mode="periodic"`` suits genuinely doubly periodic fields (M-I
    states); ``"sampled"`` differences the y-direction non-periodically and
    is the right choice for assembled HF trajectories, whose rows are time
    samples of the 1+1 flow.
    """
    lpp = reconstruct_position(S, grid, order)
    slope3 = lpp.slope_vector()
    if y_mode == "periodic":
        dy = lambda f: diff(f, grid, "y", 1, order)
    elif y_mode == "sampled":
        dy = lambda f: diff_nonperiodic(f, grid.hy, axis=-2, degree=1)
    else:
        raise ValueError(f"unknown y_mode {y_mode!r}")
    r_y = dy(lpp.periodic)
    if y_mode == "sampled":
        # Assembled 1+1 trajectories: the zero-x-mean row gauge drops the
        # secular row offset of the true surface.  Its y-derivative is the
        # row mean of the flow law r_y = r_x ^ r_xx, directly computable.
        qprime = cross(S, diff(S, grid, "x", 1, order)).mean(axis=-1)
        r_y = r_y + qprime[:, :, None]
    jet = SurfaceJet(
        grid=grid, r_periodic=lpp.periodic, slope3=slope3,
        r_x=S, r_y=r_y,
        r_xx=diff(S, grid, "x", 1, order),
        r_xy=dy(S),
        r_yy=dy(r_y),
        order=order,
    )
    gauge = np.abs(dot(jet.r_x, jet.r_x) - 1.0).max()
    if gauge > gauge_tol:
        raise ValueError(f"arclength gauge violated: max|r_x^2 - 1| = {gauge:.3e}")
    return jet


@dataclass(frozen=True)
class FundamentalForms:
    """First (E, F, G) and second (L, M, N) fundamental form coefficients."""

    E: np.ndarray
    F: np.ndarray
    G: np.ndarray
    L: np.ndarray
    M: np.ndarray
    N: np.ndarray
    g: np.ndarray          # E G - F^2
    sqrt_g: np.ndarray
    normal: np.ndarray     # (3, ny, nx), (r_x ^ r_y)/sqrt(g)


def fundamental_forms(jet, g_floor=1e-10):
    """Forms of a surface jet; the second form is b_ij = r_ij . n.

    The mean curvature trace convention downstream is H = g^{ij} b_ij
    (sum of principal curvatures).
    """
    E = dot(jet.r_x, jet.r_x)
    F = dot(jet.r_x, jet.r_y)
    G = dot(jet.r_y, jet.r_y)
    g = E * G - F * F
    gmin = float(g.min())
    if g_floor is not None and gmin <= g_floor:
        node = tuple(int(i) for i in np.unravel_index(int(np.argmin(g)), g.shape))
        raise DegenerateMetric(node, gmin)
    sq = np.sqrt(g)
    n = cross(jet.r_x, jet.r_y) / sq[None]
    return FundamentalForms(
        E=E, F=F, G=G,
        L=dot(jet.r_xx, n), M=dot(jet.r_xy, n), N=dot(jet.r_yy, n),
        g=g, sqrt_g=sq, normal=n,
    )


def curvatures(forms):
    """Mean curvature H = (EN - 2FM + GL)/g (trace convention) and K."""
    H = (forms.E * forms.N - 2.0 * forms.F * forms.M + forms.G * forms.L) / forms.g
    K = (forms.L * forms.N - forms.M**2) / forms.g
    return H, K


def scalar_curvature_e1(forms, grid, order=4, gauge_tol=1e-6):
    """Intrinsic scalar curvature for metrics in the E = 1 gauge.

    Closed form in F, G and their derivatives; agrees with the Brioschi /
    Christoffel route at truncation order (cross-checked in the test
    suite).
    """
    if np.abs(forms.E - 1.0).max() > gauge_tol:
        raise ValueError("scalar_curvature_e1 requires the E = 1 gauge")
    F, G, g = forms.F, forms.G, forms.g
    Fx = diff(F, grid, "x", 1, order)
    Fy = diff(F, grid, "y", 1, order)
    Fxy = diff_xy(F, grid, order)
    Gx = diff(G, grid, "x", 1, order)
    Gy = diff(G, grid, "y", 1, order)
    Gxx = diff(G, grid, "x", 2, order)
    num = (4.0 * F * Fx * Fy - 2.0 * Fx * Gy - 2.0 * F * Fx * Gx + Gx**2
           - 4.0 * F**2 * Fxy + 4.0 * G * Fxy + 2.0 * F**2 * Gxx
           - 2.0 * G * Gxx)
    return num / (2.0 * g * g)


def scalar_curvature_f0(G, grid, order=4):
    """Scalar curvature for E = 1, F = 0 metrics: (G_x^2 - 2 G G_xx)/(2 G^2)."""
    Gx = diff(G, grid, "x", 1, order)
    Gxx = diff(G, grid, "x", 2, order)
    return (Gx**2 - 2.0 * G * Gxx) / (2.0 * G**2)


def ricci_tensor_2d(forms, R):
    """The 2D identity Ric = (R/2) g, returned as (R11, R12, R22)."""
    half = 0.5 * R
    return half * forms.E, half * forms.F, half * forms.G


def inverse_metric(forms):
    """Inverse metric components (g^11, g^12, g^22)."""
    return forms.G / forms.g, -forms.F / forms.g, forms.E / forms.g


def laplace_beltrami(f, forms, grid, order=2):
    """Metric Laplacian (1/sqrt g) d_i (sqrt g g^{ij} d_j f)."""
    g11, g12, g22 = inverse_metric(forms)
    fx = diff(f, grid, "x", 1, order)
    fy = diff(f, grid, "y", 1, order)
    jx = forms.sqrt_g * (g11 * fx + g12 * fy)
    jy = forms.sqrt_g * (g12 * fx + g22 * fy)
    return (diff(jx, grid, "x", 1, order) + diff(jy, grid, "y", 1, order)) / forms.sqrt_g


def tr_k_squared(forms):
    """Tr(K^2) = g^{ik} g^{jl} K_ij K_kl = kappa_1^2 + kappa_2^2."""
    g11, g12, g22 = inverse_metric(forms)
    L, M, N = forms.L, forms.M, forms.N
    # shape operator P = g^{-1} b; Tr(P @ P)
    p11 = g11 * L + g12 * M
    p12 = g11 * M + g12 * N
    p21 = g12 * L + g22 * M
    p22 = g12 * M + g22 * N
    return p11 * p11 + 2.0 * p12 * p21 + p22 * p22


def xt_flow_residual(r_xt, H_prime, eta, normal):
    """Residual of the undetermined r_xt = H' n + eta flow form.

    The source leaves H' and eta unspecified; this hook just measures how
    far user-supplied choices are from a given r_xt field.
    """
    eta = np.asarray(eta, dtype=float)
    return r_xt - H_prime[None] * normal - eta[:, None, None]


@dataclass(frozen=True)
class GraphJet:
    """Graph function phi over the (r1, r2) chart with cached derivatives."""

    grid: object
    phi: np.ndarray
    p1: np.ndarray
    p2: np.ndarray
    p11: np.ndarray
    p12: np.ndarray
    p22: np.ndarray
    W: np.ndarray           # sqrt(1 + p1^2 + p2^2)


def build_graph_jet(phi, grid, order=2):
    p1 = diff(phi, grid, "x", 1, order)
    p2 = diff(phi, grid, "y", 1, order)
    return GraphJet(
        grid=grid, phi=phi, p1=p1, p2=p2,
        p11=diff(phi, grid, "x", 2, order),
        p12=diff_xy(phi, grid, order),
        p22=diff(phi, grid, "y", 2, order),
        W=np.sqrt(1.0 + p1**2 + p2**2),
    )


def graph_mean_curvature(gj):
    """H = [(1+p2^2) p11 + (1+p1^2) p22 - 2 p1 p2 p12] / W^3.

    Standard mixed-term indexing (a common transcription slip writes p22
    in the cross term; the parametric route below is the arbiter).
    """
    num = ((1.0 + gj.p2**2) * gj.p11 + (1.0 + gj.p1**2) * gj.p22
           - 2.0 * gj.p1 * gj.p2 * gj.p12)
    return num / gj.W**3


def graph_inward_normal(gj):
    """n = (-p1, -p2, 1)/W."""
    return np.stack([-gj.p1, -gj.p2, np.ones_like(gj.p1)]) / gj.W[None]


def graph_slopes(gj, r2x, r2y, r1xx, r2xx, branch="continuity",
                 want_r1y=True):
    """Recover r1x, r1y of the unit-speed generator under a graph chart.

    r1x solves (1+p1^2) r1x^2 + 2 p1 p2 r2x r1x + (1+p2^2) r2x^2 - 1 = 0;
    the sign is the requested branch ("plus", "minus", or per-node
    x-continuity starting from the plus branch).  r1y then follows from the
    generator relation, which divides by p1 -- VanishingSlope fires only
    when r1y is requested.  ``want_r1y=False`` returns (r1x, None).
    """
    p1, p2 = gj.p1, gj.p2
    disc = 1.0 + p1**2 - (1.0 + p1**2 + p2**2) * r2x**2
    dmin = float(disc.min())
    if dmin < 0.0:
        node = tuple(int(i) for i in np.unravel_index(int(np.argmin(disc)), disc.shape))
        raise NegativeDiscriminant(node, dmin)
    root = np.sqrt(disc)
    a = 1.0 + p1**2
    base = -p1 * p2 * r2x
    if branch == "plus":
        r1x = (base + root) / a
    elif branch == "minus":
        r1x = (base - root) / a
    elif branch == "continuity":
        plus = (base + root) / a
        minus = (base - root) / a
        r1x = np.empty_like(plus)
        r1x[:, 0] = plus[:, 0]
        for i in range(1, r1x.shape[1]):
            jump_p = np.abs(plus[:, i] - r1x[:, i - 1])
            jump_m = np.abs(minus[:, i] - r1x[:, i - 1])
            r1x[:, i] = np.where(jump_p <= jump_m, plus[:, i], minus[:, i])
    else:
        raise ValueError(f"unknown branch {branch!r}")

    if not want_r1y:
        return r1x, None
    small = np.abs(p1) < 1e-12
    if small.any():
        node = tuple(int(i) for i in np.unravel_index(int(np.argmax(small)), small.shape))
        raise VanishingSlope(node)
    r1y = (r1x * r2xx - r1xx * r2x - p2 * r2y) / p1
    return r1x, r1y
