"""Independent oracles for testing: analytic radial pressure profiles,
quadrature of initial mass, and a dense entry-by-entry reference of the
IMEX step.

Nothing here touches the sparse assemblers; the dense reference is written
straight from the per-row scheme (zero-flux inner closure, membrane
exchange outer closure, periodic angular stencil) so that agreement with
the sparse path validates both.
"""

import math

import numpy as np

from .errors import GridTooLarge, OutOfDomain
from .grid import PolarGrid
from .pressure import PhysParams
from .transport import SimState
from .velocity import FaceVelocityField

DENSE_CELL_CAP = 200


def radial_poisson_exact(r, R_min, R, k_d, p_inner=0.0, p_outer=1.0):
    """Axisymmetric solution of -laplace(p) = -k_d on the annulus.

    p(r) = k_d r^2/4 + a ln r + b, with (a, b) matching the two Dirichlet
    values.  Accepts scalars or arrays in [R_min, R].
    """
    r = np.asarray(r, dtype=float)
    if np.any(r < R_min - 1e-12) or np.any(r > R + 1e-12):
        raise OutOfDomain(f"radius outside [{R_min}, {R}]")
    a = (p_outer - p_inner - k_d * (R ** 2 - R_min ** 2) / 4.0) / math.log(R / R_min)
    b = p_inner - k_d * R_min ** 2 / 4.0 - a * math.log(R_min)
    out = k_d * r ** 2 / 4.0 + a * np.log(r) + b
    return out if out.ndim else float(out)


def radial_poisson_exact_gradient(r, R_min, R, k_d, p_inner=0.0, p_outer=1.0):
    """dp/dr of the profile above; the face velocity oracle."""
    r = np.asarray(r, dtype=float)
    a = (p_outer - p_inner - k_d * (R ** 2 - R_min ** 2) / 4.0) / math.log(R / R_min)
    out = k_d * r / 2.0 + a / r
    return out if out.ndim else float(out)


def initial_mass_quadrature(preset, R_min, R, refinement=2000, k_on=0.3, k_off=1.0):
    """Midpoint quadrature of the model mass of a named initial condition,
    integrating the scaled fields directly (area element dr dtheta)."""
    m = int(refinement)
    thetas = (np.arange(m) + 0.5) * (2.0 * np.pi / m)
    rs = R_min + (np.arange(m) + 0.5) * ((R - R_min) / m)
    dth = 2.0 * np.pi / m
    drq = (R - R_min) / m
    if preset == "polarised":
        ang = np.cos(thetas - np.pi) + 1.0
        bulk = drq * dth * rs.size * np.sum(ang)  # integrand is r-independent
        boundary = dth * np.sum(0.5 * ang)
    elif preset == "uniform":
        bulk = dth * np.sum(np.ones_like(thetas)) * drq * np.sum(rs)
        boundary = dth * np.sum(np.full_like(thetas, (k_on / k_off) * R if k_off > 0 else 0.0))
    else:
        raise ValueError(f"unknown preset {preset!r}")
    return float(bulk + boundary)


def _upwind(u, x_minus, x_plus):
    return max(u, 0.0) * x_minus + min(u, 0.0) * x_plus


def dense_reference_step(state: SimState, grid: PolarGrid, params: PhysParams, dt,
                         u: FaceVelocityField = None) -> SimState:
    """IMEX step via dense matrices written from the per-row equations.

    Intended for cross-validation only; grids above DENSE_CELL_CAP cells
    are rejected.  When no face velocities are given the advection terms
    vanish.
    """
    n_r, n_t = grid.n_r, grid.n_theta
    if n_r * n_t > DENSE_CELL_CAP:
        raise GridTooLarge(f"{n_r * n_t} cells exceeds the dense-reference cap {DENSE_CELL_CAP}")
    if u is None:
        u = FaceVelocityField(np.zeros((n_r + 1, n_t)), np.zeros((n_r, n_t)))

    rc = grid.r_centers
    rf = grid.r_faces
    dr, dth = grid.dr, grid.dtheta
    D = params.D
    n = (n_r + 1) * n_t
    M = np.eye(n)
    rhs = np.empty(n)

    def idx(j, k):
        return (k % n_t) + j * n_t

    lam_r = D * dt / dr ** 2
    c = state.c_tilde
    for j in range(n_r):
        lam_t = D * dt / (rc[j] ** 2 * dth ** 2)
        adv_t = dt / (rc[j] ** 2 * dth)
        for k in range(n_t):
            row = idx(j, k)
            M[row, idx(j, k - 1)] -= lam_t
            M[row, row] += 2.0 * lam_t
            M[row, idx(j, k + 1)] -= lam_t
            if j > 0:
                M[row, idx(j - 1, k)] -= lam_r * rf[j] / rc[j - 1]
                M[row, row] += lam_r * rf[j] / rc[j]
            if j < n_r - 1:
                M[row, row] += lam_r * rf[j + 1] / rc[j]
                M[row, idx(j + 1, k)] -= lam_r * rf[j + 1] / rc[j + 1]
            else:
                M[row, row] += dt * params.k_on / dr
                M[row, idx(n_r, k)] -= dt * params.k_off / dr

            val = c[j, k]
            # angular advection, periodic
            val += adv_t * (_upwind(u.u_ang[j, k - 1], c[j, k - 1], c[j, k])
                            - _upwind(u.u_ang[j, k], c[j, k], c[j, (k + 1) % n_t]))
            # radial advection through interior faces only
            if j > 0:
                val += (dt / dr) * _upwind(u.u_rad[j, k], c[j - 1, k], c[j, k])
            if j < n_r - 1:
                val -= (dt / dr) * _upwind(u.u_rad[j + 1, k], c[j, k], c[j + 1, k])
            rhs[row] = val

    for k in range(n_t):
        row = idx(n_r, k)
        M[row, row] += dt * params.k_off
        M[row, idx(n_r - 1, k)] -= dt * params.k_on
        rhs[row] = state.mu_tilde[k]

    sol = np.linalg.solve(M, rhs)
    return SimState(state.t + dt, sol[: n_r * n_t].reshape(n_r, n_t), sol[n_r * n_t:])
