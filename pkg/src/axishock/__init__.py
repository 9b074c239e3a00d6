"""Perturbed axisymmetric transonic shocks in a cylinder with an external force.

Typical use::

    from axishock import RunConfig, run_2d
    run = run_2d(RunConfig())
    print(run.summary())
"""
from .gas import FlowState, GasLaw
from .background1d import BackgroundProblem, BackgroundSolution, ForceProfile, State1D
from .upstream import InletPerturbation, PerturbationData, UpstreamField, default_perturbation, march_supersonic
from .fields import FieldBlock, PhysicalFields
from .subsonic import (CoefficientTable, EllipticProblem, Grid, Iterate, compute_coefficients, fixed_point,
                       prepare_inputs, solve_elliptic_fd, solve_elliptic_modes)
from .verify import ResidualReport, check_thresholds, structural_claims, verify_all
from .config import RunConfig, load_config
from .pipeline import Run2D, run_2d, solve_background
from .errors import (AdmissibilityError, AxishockError, ConfigError, DivergenceError, SolverError,
                     VerificationFailure)

__version__ = "0.1.0"

__all__ = [
    "FlowState", "GasLaw", "BackgroundProblem", "BackgroundSolution", "ForceProfile", "State1D",
    "InletPerturbation", "PerturbationData", "UpstreamField", "default_perturbation", "march_supersonic",
    "FieldBlock", "PhysicalFields", "CoefficientTable", "EllipticProblem", "Grid", "Iterate",
    "compute_coefficients", "fixed_point", "prepare_inputs", "solve_elliptic_fd", "solve_elliptic_modes",
    "ResidualReport", "check_thresholds", "structural_claims", "verify_all", "RunConfig", "load_config",
    "Run2D", "run_2d", "solve_background", "AdmissibilityError", "AxishockError", "ConfigError",
    "DivergenceError", "SolverError", "VerificationFailure", "__version__",
]
