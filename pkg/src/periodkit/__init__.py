"""Rigorous numeric checks around lattice minima, theta series, stable
heights, interpolation constants, and explicit isogeny degree bounds."""

from .bounds import PROOF_CONSTANTS, BoundReport, ProofConstants
from .heights import CurveRecord, HeightValue, convert_height, faltings_height_silverman
from .lattice import (
    EllipticLattice,
    PolarizedTorus,
    SiegelTau,
    Subspace,
    UnimodularMap,
    avoidance_minimum,
    rho_inverse_squared,
    shortest_vector,
    siegel_reduce,
)
from .modular import delta_tau, j_invariant
from .serre import find_threshold
from .theta import RiemannTau, TorusPoint, theta_from_F, torus_l2_norm, torus_log_integral

__version__ = "0.1.0"

__all__ = [
    "BoundReport",
    "CurveRecord",
    "EllipticLattice",
    "HeightValue",
    "PROOF_CONSTANTS",
    "PolarizedTorus",
    "ProofConstants",
    "RiemannTau",
    "SiegelTau",
    "Subspace",
    "TorusPoint",
    "UnimodularMap",
    "avoidance_minimum",
    "convert_height",
    "delta_tau",
    "faltings_height_silverman",
    "find_threshold",
    "j_invariant",
    "rho_inverse_squared",
    "shortest_vector",
    "siegel_reduce",
    "theta_from_F",
    "torus_l2_norm",
    "torus_log_integral",
    "__version__",
]
