"""Exception types shared by all spinflow modules."""


class SpinflowError(Exception):
    """Base class for all errors raised by spinflow."""


class GridTooSmall(SpinflowError):
    """A stencil or solver needs more grid nodes than are available."""


class SecularGrowth(SpinflowError):
    """An x-antiderivative was requested for data with a nonzero row mean.

    Periodic quadrature in x is only solvable when every y-row of the
    integrand averages to zero; a secular (linear-in-x) part would otherwise
    be silently introduced.
    """

    def __init__(self, row, mean_value):
        self.row = row
        self.mean_value = mean_value
        super().__init__(
            f"row {row}: |x-mean| = {abs(mean_value):.3e} exceeds tolerance"
        )


class ResonantMode(SpinflowError):
    """A null mode of the hyperbolic constraint operator carries source energy."""

    def __init__(self, kx, ky, amplitude):
        self.kx = kx
        self.ky = ky
        self.amplitude = amplitude
        super().__init__(
            f"mode (kx={kx}, ky={ky}) is in the operator null space but the "
            f"source has amplitude {amplitude:.3e} there"
        )


class NonzeroMean(SpinflowError):
    """The (0,0) Fourier coefficient of a source exceeds tolerance."""


class DegenerateVector(SpinflowError):
    """normalize() hit a node with vanishing vector norm."""

    def __init__(self, node, norm):
        self.node = node
        self.norm = norm
        super().__init__(f"vector norm {norm:.3e} at node {node} below 1e-13")


class DegenerateMetric(SpinflowError):
    """The metric determinant EG - F^2 fell below the configured floor."""

    def __init__(self, node, value):
        self.node = node
        self.value = value
        super().__init__(f"metric determinant {value:.3e} at node {node}")


class NegativeDiscriminant(SpinflowError):
    """The graph-slope quadratic has no real root at some node."""

    def __init__(self, node, value):
        self.node = node
        self.value = value
        super().__init__(f"discriminant {value:.3e} at node {node}")


class VanishingSlope(SpinflowError):
    """Graph slope recovery divides by a vanishing phi_r1."""

    def __init__(self, node):
        self.node = node
        super().__init__(f"|phi_r1| < 1e-12 at node {node}")


class BlowUp(SpinflowError):
    """A flow quantity crossed its ceiling; carries the estimated time.

    For the spectral-parameter Burgers flow this is the expected terminal
    state rather than a failure; evolution drivers attach the partial
    trajectory so callers can inspect it.
    """

    def __init__(self, t_est, reason="", trajectory=None):
        self.t_est = t_est
        self.reason = reason
        self.trajectory = trajectory
        super().__init__(f"blow-up detected at t = {t_est:.6g}: {reason}")


class ConstraintLost(SpinflowError):
    """The nonlocal constraint residual exceeded its evolution ceiling."""

    def __init__(self, t, residual, trajectory=None):
        self.t = t
        self.residual = residual
        self.trajectory = trajectory
        super().__init__(f"constraint residual {residual:.3e} at t = {t:.6g}")


class InsufficientHistory(SpinflowError):
    """An operation needs more stored time levels than the trajectory has."""


class ConfigInvalid(SpinflowError):
    """A run configuration failed schema validation."""
