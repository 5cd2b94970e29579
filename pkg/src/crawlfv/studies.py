"""Verification studies behind the poisson-check and mass-check commands."""

import math
from dataclasses import dataclass

import numpy as np

from .driver import Config, CoupledOperators, coupled_step, initial_state, total_mass
from .oracles import radial_poisson_exact
from .grid import build_grid
from .pressure import PhysParams, solve_pressure


@dataclass
class ConvergenceResult:
    mode: str
    n_r_values: list
    errors: list
    orders: list

    @property
    def observed_order(self):
        """Median of the pairwise refinement orders."""
        return float(np.median(self.orders))


def poisson_convergence(R_min=0.5, R=1.5, k_d=1.0, mode="paper",
                        n_r_values=(10, 20, 40, 80), n_theta=8, tol=1e-12):
    """L-infinity error of the pressure solve against the axisymmetric
    analytic profile, under radial refinement at fixed uniform boundary data."""
    params = PhysParams(k_d=k_d, delta=0.0, gamma=0.0, D=1.0, k_on=0.0, k_off=1.0)
    errors = []
    for n_r in n_r_values:
        grid = build_grid(R_min, R, n_r, n_theta)
        mu = np.zeros(n_theta)  # delta = 0 already makes the bracket 1
        field = solve_pressure(grid, mu, params, mode=mode, tol=tol)
        exact = radial_poisson_exact(grid.r_centers, R_min, R, k_d, 0.0, 1.0)
        err = np.abs(field.pressure() - exact[:, None]).max()
        errors.append(float(err))
    orders = [math.log2(errors[i] / errors[i + 1]) for i in range(len(errors) - 1)]
    return ConvergenceResult(mode, list(n_r_values), errors, orders)


def mass_check(config: Config, n_steps):
    """Run n_steps coupled steps and return the largest relative mass drift."""
    ops = CoupledOperators.from_config(config)
    state = initial_state(config, ops.grid)
    m0 = total_mass(state, ops.grid)
    drift = 0.0
    for n in range(n_steps):
        state, row = coupled_step(state, ops, config)
        drift = max(drift, abs(row.mass - m0) / abs(m0))
    return drift
