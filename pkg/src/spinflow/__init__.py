"""spinflow: a numerical laboratory for integrable geometric flows.

Implements the Heisenberg-ferromagnet flow, the Myrzakulov-I flow, graph and
parametric mean-curvature flow, 2D conformal Ricci flows, the surface
geometry identities that connect them, Lax-pair zero-curvature residual
checks, and the spectral-parameter blow-up mechanism -- all on periodic
finite-difference grids with built-in cross-verification.

The compiled stencil backend is selected automatically when built;
``spinflow.BACKEND`` says which one is active.
"""

from spinflow.backend import BACKEND
from spinflow.errors import (BlowUp, ConfigInvalid, ConstraintLost,
                             DegenerateMetric, DegenerateVector, GridTooSmall,
                             InsufficientHistory, NegativeDiscriminant,
                             NonzeroMean, ResonantMode, SecularGrowth,
                             SpinflowError, VanishingSlope)
from spinflow.grid import Grid2D
from spinflow.spin import FlowParams, MIState

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "Grid2D", "FlowParams", "MIState", "SpinflowError",
    "GridTooSmall", "SecularGrowth", "ResonantMode", "NonzeroMean",
    "DegenerateVector", "DegenerateMetric", "NegativeDiscriminant",
    "VanishingSlope", "BlowUp", "ConstraintLost", "InsufficientHistory",
    "ConfigInvalid", "__version__",
]
