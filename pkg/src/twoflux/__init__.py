"""Solvers for scalar conservation laws with one spatial flux discontinuity.

An exact front tracking algorithm over piecewise-linear fluxes, a Godunov
finite volume reference scheme, and a harness that verifies convergence-rate
guarantees and explicit error bounds empirically.
"""

from ._kernels import COMPILED as kernel_compiled
from .analysis import (
    BoundConstants,
    ErrorRecord,
    bound_constants,
    bv_bound_rhs,
    fit_rate,
    l1_distance,
    linf_hat_distance,
    main_bound_rhs,
    total_variation,
)
from .discretize import BVPartition, bv_partition, project_cells, project_restricted
from .fluxes import (
    Crossing,
    PiecewiseLinearFlux,
    SmoothFlux,
    builtin_flux,
    find_crossings,
    godunov_flux,
    godunov_flux_gap,
    interpolate,
    lower_convex_envelope,
    sup_gap,
    upper_concave_envelope,
)
from .godunov import GodunovGrid, cfl_lambda, hat_profile
from .problems import EXPERIMENTS, TwoFluxProblem, experiment, riemann_data
from .riemann import TracePair, WaveFan, gamma_check, solve_classic, solve_interface
from .stepfn import PiecewiseAffine, StepFunction
from .tracker import Front, FrontTrackingState

__version__ = "0.1.0"
