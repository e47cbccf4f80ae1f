"""Casimir-Polder interaction of a polarizable particle with a gently curved,
perfectly conducting surface, evaluated through the derivative expansion.

The coefficient table used by the expansion is cross-checked (and, for one
row, recovered) by an independent scattering-kernel oracle in
:mod:`cpdex.oracle`.
"""

__version__ = "0.1.0"

from .specfun import e1, neg_e1, integrate_semiinfinite, QuadratureSpec
from .betas import BetaIndex, beta, beta_classical, beta_moment, moment_mapping
from .polarizability import PolarizabilityTensor, StaticModel, TwoStateModel
from .geometry import SurfaceJet, closest_point, jet_at, principal_frame
from .potential import (
    brace,
    potential_T0,
    potential_retarded,
    potential_classical,
    potential_finiteT,
    potential_london,
    orientation_scan,
)

__all__ = [
    "e1",
    "neg_e1",
    "integrate_semiinfinite",
    "QuadratureSpec",
    "BetaIndex",
    "beta",
    "beta_classical",
    "beta_moment",
    "moment_mapping",
    "PolarizabilityTensor",
    "StaticModel",
    "TwoStateModel",
    "SurfaceJet",
    "closest_point",
    "jet_at",
    "principal_frame",
    "brace",
    "potential_T0",
    "potential_retarded",
    "potential_classical",
    "potential_finiteT",
    "potential_london",
    "orientation_scan",
]
