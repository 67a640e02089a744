"""Desk-scale numerical laboratory for Fourier multiplier norms.

Subpackages cover scalar analytic machinery (Gamma, conformal maps, harmonic
majorants), closed-form interpolation norms of the scalar couple, a discrete
periodic model of weighted L^p with exact and certified multiplier norms,
unimodular-symbol growth experiments, zonal spherical-harmonic identities,
singular integrals along curves with their counterexample family, and a CLI
that packages the experiments behind deterministic seeds.
"""

from . import curves, growth, grids, interpolation, optimize, quadrature, serialize, special, spherical
from .errors import (AliasingError, BranchSelectionError, CancellationError,
                     DegenerateCurveError, DimensionMismatchError, DivergentWeightError,
                     DomainError, GridTooLargeError, InfeasibleError,
                     InsufficientDataError, MultlabError, NonpositiveSampleError,
                     PoleError, QuadratureError, ZeroFunctionError)
from .grids import (GridFunction, NormBudget, NormEstimate, Symbol, Weight,
                    ap_characteristic, apply_multiplier, lp_norm, multiplier_norm)

__version__ = "0.1.0"
