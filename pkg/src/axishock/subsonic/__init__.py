"""Iteration scheme for the perturbed subsonic flow and its free boundary."""
from .grid import Grid, Iterate, composite_norm
from .coefficients import CoefficientTable, compute_coefficients
from .remainders import RemainderBundle, SolverInputs, downstream_state, nonlinear_remainders, prepare_inputs
from .elliptic import EllipticProblem, EllipticSolution, FDEllipticSolver, ModeEllipticSolver, \
    solve_elliptic_fd, solve_elliptic_modes, neumann_disk_eigenvalues
from .iteration import (FixedPointReport, apply_T, fixed_point, recover_velocity, transport_bernoulli,
                        transport_swirl, update_shock)
from .assemble import assemble_physical_solution

__all__ = [
    "Grid", "Iterate", "composite_norm", "CoefficientTable", "compute_coefficients", "RemainderBundle",
    "SolverInputs", "downstream_state", "nonlinear_remainders", "prepare_inputs", "EllipticProblem",
    "EllipticSolution", "FDEllipticSolver", "ModeEllipticSolver", "solve_elliptic_fd", "solve_elliptic_modes",
    "neumann_disk_eigenvalues", "FixedPointReport", "apply_T", "fixed_point", "recover_velocity",
    "transport_bernoulli", "transport_swirl", "update_shock", "assemble_physical_solution",
]
