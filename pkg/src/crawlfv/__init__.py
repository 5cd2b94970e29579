"""Finite-volume solver for a 2D crawling-cell migration model on a rigid
annulus: a pressure Poisson problem coupled through a nonlocal boundary
velocity to a nonlinear reaction-advection-diffusion system."""

from . import errors
from .driver import (Config, CoupledOperators, Diagnostics, DiagnosticsRow,
                     SimResult, SteadyReport, coupled_step, initial_state,
                     polarization, run_simulation, steady_state_reached,
                     total_mass)
from .grid import PolarGrid, build_grid, flatten_index, theta_neighbor
from .oracles import (dense_reference_step, initial_mass_quadrature,
                      radial_poisson_exact, radial_poisson_exact_gradient)
from .output import parse_config, write_config_echo, write_snapshot, write_sweep_csv, write_timeseries
from .pressure import (PhysParams, PressureField, PressureProblem,
                       assemble_pressure_operator, assemble_pressure_rhs,
                       boundary_bracket, solve_pressure)
from .sparse import (DirectFactorization, SolveReport, SparseMatrix,
                     conjugate_gradient, matvec, solve_linear)
from .studies import mass_check, poisson_convergence
from .sweep import SweepRecord, run_sweep
from .transport import (SimState, TransportStepper, advective_cfl,
                        assemble_advection_operator, assemble_diffusion_operator,
                        imex_step, upwind_flux)
from .velocity import CellVelocity, FaceVelocityField, cell_velocity, face_velocities

__version__ = "0.1.0"

__all__ = [
    "Config", "CoupledOperators", "Diagnostics", "DiagnosticsRow", "SimResult",
    "SteadyReport", "coupled_step", "initial_state", "polarization",
    "run_simulation", "steady_state_reached", "total_mass",
    "PolarGrid", "build_grid", "flatten_index", "theta_neighbor",
    "dense_reference_step", "initial_mass_quadrature", "radial_poisson_exact",
    "radial_poisson_exact_gradient",
    "parse_config", "write_config_echo", "write_snapshot", "write_sweep_csv",
    "write_timeseries",
    "PhysParams", "PressureField", "PressureProblem",
    "assemble_pressure_operator", "assemble_pressure_rhs", "boundary_bracket",
    "solve_pressure",
    "DirectFactorization", "SolveReport", "SparseMatrix", "conjugate_gradient",
    "matvec", "solve_linear",
    "mass_check", "poisson_convergence",
    "SweepRecord", "run_sweep",
    "SimState", "TransportStepper", "advective_cfl",
    "assemble_advection_operator", "assemble_diffusion_operator", "imex_step",
    "upwind_flux",
    "CellVelocity", "FaceVelocityField", "cell_velocity", "face_velocities",
    "errors",
]
