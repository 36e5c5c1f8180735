"""The 3D (x, y, t) metric of a Myrzakulov-I trajectory and its diagnostics.

The six components are computed from the dot-product definitions
G_munu = d_mu r . d_nu r with r_t taken from the flow law
r_t = S ^ S_y + u S.  The circulating closed forms for G33, G23 and for
det(G) look internally inconsistent, so they are evaluated alongside and
the discrepancy is *reported*, never asserted.
"""

from dataclasses import dataclass

import numpy as np

from spinflow.christoffel import derivs_3d, ricci_tensor
from spinflow.errors import InsufficientHistory
from spinflow.surface import jet_from_spin
from spinflow.vecalg import cross, dot, triple


@dataclass(frozen=True)
class Metric3Sample:
    """Six metric components on the (x, y) grid at one stored time."""

    G11: np.ndarray
    G12: np.ndarray
    G13: np.ndarray
    G22: np.ndarray
    G23: np.ndarray
    G33: np.ndarray
    t: float = 0.0

    def as_tensor(self):
        """(3, 3, ny, nx) symmetric stack."""
        return np.stack([
            np.stack([self.G11, self.G12, self.G13]),
            np.stack([self.G12, self.G22, self.G23]),
            np.stack([self.G13, self.G23, self.G33]),
        ])


def metric3_from_state(S, u, grid, order=2, t=0.0):
    """Metric sample of one M-I snapshot via the dot-product definitions."""
    jet = jet_from_spin(S, grid, order)
    rt = cross(S, jet.r_xy) + u[None] * S
    return Metric3Sample(
        G11=dot(jet.r_x, jet.r_x),
        G12=dot(jet.r_x, jet.r_y),
        G13=dot(jet.r_x, rt),
        G22=dot(jet.r_y, jet.r_y),
        G23=dot(jet.r_y, rt),
        G33=dot(rt, rt),
        t=t,
    ), jet, rt


def assemble_metric3(traj, order=2):
    """Metric samples along a stored M-I trajectory."""
    return [metric3_from_state(st.S, st.u, traj.grid, order, st.t)[0]
            for st in traj.states]


def det3(sample):
    """Direct 3x3 determinant of a metric sample."""
    G = sample.as_tensor()
    m = np.moveaxis(G.reshape(3, 3, -1), -1, 0)
    return np.linalg.det(m).reshape(G.shape[2:])


def closed_form_metric3(S, u, grid, order=2, t=0.0):
    """The circulating closed forms for the M-I metric components.

    G33 = r_xy^2 + u and G23 = u r_y.r_y - r_xy.(r_x ^ r_y) as usually
    quoted; kept verbatim so the discrepancy against the dot-product
    definitions can be measured.
    """
    jet = jet_from_spin(S, grid, order)
    ry, rxy = jet.r_y, jet.r_xy
    return Metric3Sample(
        G11=np.ones(grid.shape),
        G12=dot(jet.r_x, ry),
        G13=u.copy(),
        G22=dot(ry, ry),
        G23=u * dot(ry, ry) - triple(rxy, jet.r_x, ry),
        G33=dot(rxy, rxy) + u,
        t=t,
    )


def closed_form_det3(S, u, grid, order=2):
    """The source's determinant polynomial, evaluated verbatim."""
    jet = jet_from_spin(S, grid, order)
    ry2 = dot(jet.r_y, jet.r_y)
    rxy2 = dot(jet.r_xy, jet.r_xy)
    f = dot(jet.r_x, jet.r_y)
    planar = ry2 - f**2
    return u**2 * (rxy2 - ry2) + u * planar + planar * rxy2


def metric3_discrepancy_report(S, u, grid, order=2):
    """Max/mean gaps between the direct (authoritative) and closed forms."""
    direct, _, _ = metric3_from_state(S, u, grid, order)
    closed = closed_form_metric3(S, u, grid, order)
    det_direct = det3(direct)
    det_closed = closed_form_det3(S, u, grid, order)
    rep = {}
    for name in ("G11", "G12", "G13", "G22", "G23", "G33"):
        d = np.abs(getattr(direct, name) - getattr(closed, name))
        rep[name] = {"max": float(d.max()), "mean": float(d.mean())}
    d = np.abs(det_direct - det_closed)
    rep["detG"] = {"max": float(d.max()), "mean": float(d.mean())}
    rep["note"] = ("direct dot-product definitions are authoritative; "
                   "agreement with the closed forms is not asserted")
    return rep


def ricci3_numeric(samples, dt_save, grid, order=2, margin=2):
    """FD Ricci tensor of the 3D metric over stored time levels.

    Needs at least 5 levels; returns (R, interior_slice) where R has shape
    (3, 3, nt, ny, nx) and the slice marks the levels (margin from both
    ends) on which the t-stencils are central and trustworthy.  Output is
    symmetrized; DegenerateMetric propagates from the inversion.
    """
    nt = len(samples)
    if nt < 5:
        raise InsufficientHistory(f"need >= 5 stored levels, got {nt}")
    G = np.stack([s.as_tensor() for s in samples], axis=2)  # (3,3,nt,ny,nx)
    R, _ = ricci_tensor(G, derivs_3d(grid, dt_save, order))
    return R, slice(margin, nt - margin)
