"""Zero-curvature residuals for the HF and M-I Lax pairs.

A spin field embeds as the 2x2 matrix field S.sigma; the linear problems

    HF:   Phi_x = U Phi, Phi_y = V Phi,
          U = (lambda/2i) S.sigma,
          V = (i lambda^2/2) S.sigma + (lambda/2) (S_x.sigma)(S.sigma)

    M-I:  Phi_x = U Phi, Phi_t = lambda Phi_y + V Phi,
          U = (i lambda/2) S.sigma,
          V = (lambda/4) ([S.sigma, S_y.sigma] + 2 i u S.sigma)

are compatible exactly when the flows hold, so the commutator residuals

    Z_hf = U_y - V_x + [U, V]
    Z_mi = U_t - lambda U_y - V_x + [U, V]

are the integrability certificates.  The two circulating prefactor
conventions for U (lambda/2i versus i lambda/2) are both evaluated; the
reports state which one is consistent with each V.
"""

from dataclasses import dataclass

import numpy as np

from spinflow.errors import InsufficientHistory
from spinflow.stencils import diff, diff_nonperiodic

SIGMA = np.array([
    [[0, 1], [1, 0]],
    [[0, -1j], [1j, 0]],
    [[1, 0], [0, -1]],
], dtype=np.complex128)

CONVENTIONS = ("lambda_over_2i", "i_lambda_over_2")


def pauli_selftest(tol=1e-15):
    """Check sigma_a sigma_b = delta_ab I + i eps_abc sigma_c."""
    eye = np.eye(2, dtype=np.complex128)
    eps = np.zeros((3, 3, 3))
    eps[0, 1, 2] = eps[1, 2, 0] = eps[2, 0, 1] = 1.0
    eps[0, 2, 1] = eps[2, 1, 0] = eps[1, 0, 2] = -1.0
    worst = 0.0
    for a in range(3):
        for b in range(3):
            prod = SIGMA[a] @ SIGMA[b]
            expect = (a == b) * eye + 1j * sum(eps[a, b, c] * SIGMA[c]
                                               for c in range(3))
            worst = max(worst, float(np.abs(prod - expect).max()))
    if worst > tol:
        raise AssertionError(f"Pauli algebra violated at {worst:.3e}")
    return worst


#: algebra is validated once at import; failure here means a broken build
_PAULI_CHECK = None


def embed(v):
    """v . sigma as a (..., 2, 2) complex matrix field; v is (3, ...)."""
    return np.einsum("c...,cab->...ab", v, SIGMA)


def frobenius_max(Z):
    """Max over nodes of the Frobenius norm of a (..., 2, 2) field."""
    return float(np.sqrt((np.abs(Z) ** 2).sum(axis=(-2, -1))).max())


def frobenius_l2(Z):
    """Root-mean-square Frobenius norm over nodes."""
    return float(np.sqrt((np.abs(Z) ** 2).sum(axis=(-2, -1)).mean()))


def _commutator(A, B):
    return A @ B - B @ A


def _u_prefactor(lam, convention):
    # lambda/(2i) = -i lambda/2 for the HF printing, +i lambda/2 for M-I
    if convention == "lambda_over_2i":
        return lam / 2j
    if convention == "i_lambda_over_2":
        return 1j * lam / 2.0
    raise ValueError(f"unknown convention {convention!r}")


def hf_pair(S, grid, lam, order=2, convention="lambda_over_2i"):
    """(U, V) matrix fields of the HF Lax pair for a (3, ny, nx) spin sample.

    The convention flag only swaps the U prefactor (lambda/2i versus
    i lambda/2); V is fixed, so the residual report identifies which
    prefactor is compatible with it.
    """
    Sm = embed(S)
    Sxm = embed(diff(S, grid, "x", 1, order))
    U = _u_prefactor(lam, convention) * Sm
    V = (1j * lam**2 / 2.0) * Sm + (lam / 2.0) * (Sxm @ Sm)
    return U, V


def hf_zero_curvature_residual(S, grid, lam, order=2, convention="lambda_over_2i"):
    """Z = U_y - V_x + [U, V] for a spin sample S(x, y) of the HF flow.

    y is the HF evolution variable, so S is an assembled trajectory (row j
    holds the state at y_j).  U_y is differenced non-periodically along the
    rows -- sampled trajectories are generically not y-periodic (even exact
    solutions carry a discrete-dispersion phase offset across the period).
    Returns (Z, report dict).
    """
    U, V = hf_pair(S, grid, lam, order, convention)
    Z = (_matrix_diff_t(U, grid.hy) - _matrix_diff(V, grid, "x", order)
         + _commutator(U, V))
    return Z, {
        "lambda": lam,
        "convention": convention,
        "max_norm": frobenius_max(Z),
        "l2_norm": frobenius_l2(Z),
    }


def _matrix_diff(M, grid, axis, order):
    """Componentwise periodic derivative of a (ny, nx, 2, 2) field."""
    out = np.empty_like(M)
    for a in range(2):
        for b in range(2):
            out[..., a, b] = (diff(M[..., a, b].real, grid, axis, 1, order)
                              + 1j * diff(M[..., a, b].imag, grid, axis, 1, order))
    return out


def _matrix_diff_t(M, h, axis=0):
    """Componentwise non-periodic derivative along a sampled axis."""
    return (diff_nonperiodic(M.real, h, axis=axis, degree=1)
            + 1j * diff_nonperiodic(M.imag, h, axis=axis, degree=1))


def mi_pair(S, u, grid, lam, order=2, convention="i_lambda_over_2"):
    """(U, V) of the M-I Lax pair for one (S, u) snapshot."""
    Sm = embed(S)
    Sym = embed(diff(S, grid, "y", 1, order))
    U = _u_prefactor(lam, convention) * Sm
    V = (lam / 4.0) * (_commutator(Sm, Sym) + 2j * u[..., None, None] * Sm)
    return U, V


def mi_zero_curvature_residual(traj, lam, order=2, convention="i_lambda_over_2"):
    """Z = U_t - lambda U_y - V_x + [U, V] over a stored M-I trajectory.

    Time derivatives are central differences over the stored levels; the
    residual is reported on interior levels.  Needs >= 3 levels.
    """
    if len(traj.states) < 3:
        raise InsufficientHistory(
            f"need >= 3 stored levels, got {len(traj.states)}"
        )
    grid = traj.grid
    dts = np.diff(traj.times)
    if not np.allclose(dts, dts[0], rtol=1e-12, atol=0):
        raise ValueError("trajectory must be stored at uniform time spacing")
    Us, Vs = [], []
    for st in traj.states:
        U, V = mi_pair(st.S, st.u, grid, lam, order, convention)
        Us.append(U)
        Vs.append(V)
    Us = np.stack(Us)
    Vs = np.stack(Vs)
    U_t = diff_nonperiodic(Us.real, dts[0], axis=0, degree=1) \
        + 1j * diff_nonperiodic(Us.imag, dts[0], axis=0, degree=1)
    sl = slice(1, -1)
    Z = np.empty_like(Us[sl])
    for j, idx in enumerate(range(1, len(traj.states) - 1)):
        Z[j] = (U_t[idx]
                - lam * _matrix_diff(Us[idx], grid, "y", order)
                - _matrix_diff(Vs[idx], grid, "x", order)
                + _commutator(Us[idx], Vs[idx]))
    return Z, {
        "lambda": lam,
        "convention": convention,
        "max_norm": frobenius_max(Z),
        "l2_norm": frobenius_l2(Z),
    }


def consistent_convention(reports):
    """Given reports for both conventions, name the empirically consistent one."""
    by = {r["convention"]: r["max_norm"] for r in reports}
    return min(by, key=by.get)


def lambda_interpolation_check(residual_fn, lams=(0.3, 0.9, 1.7), target=2.5):
    """Degree-2 polynomial structure of the residual in lambda.

    Lagrange-interpolates the residual matrix field from three lambda
    values to a fourth and returns the max-norm gap to the direct
    evaluation (valid whether or not the underlying field solves the
    flow).
    """
    Zs = [residual_fn(lam) for lam in lams]
    w = []
    for i, li in enumerate(lams):
        num, den = 1.0, 1.0
        for j, lj in enumerate(lams):
            if i != j:
                num *= (target - lj)
                den *= (li - lj)
        w.append(num / den)
    Zi = sum(wi * Z for wi, Z in zip(w, Zs))
    Zt = residual_fn(target)
    return frobenius_max(Zt - Zi)


_PAULI_CHECK = pauli_selftest()
