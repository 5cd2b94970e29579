"""One IMEX step of the coupled bulk/boundary concentration system.

Unknown vector layout: the scaled bulk concentration c_tilde = r*c over all
cells (angle-fastest), followed by the scaled boundary concentration
mu_tilde on the outer circle.  Diffusion and the membrane exchange are
implicit, the upwind advection is explicit:

    (I + (dt/dr^2) A) E_new = (I - (dt/dr) B) E_old

Both operators are assembled face by face so that fluxes cancel exactly
between neighboring rows; with weights dr on every cell row and 1 on every
boundary row, the weighted column sums of A and B vanish and the discrete
mass  dr*dtheta*sum(c_tilde) + dtheta*sum(mu_tilde)  is conserved to solver
precision at every step.
"""

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import DimensionMismatch
from .grid import PolarGrid
from .pressure import PhysParams
from .sparse import DirectFactorization, SparseMatrix
from .velocity import FaceVelocityField


@dataclass
class SimState:
    """Scaled concentration fields at simulation time t."""

    t: float
    c_tilde: np.ndarray   # shape (n_r, n_theta)
    mu_tilde: np.ndarray  # shape (n_theta,)

    def __post_init__(self):
        self.c_tilde = np.asarray(self.c_tilde, dtype=float)
        self.mu_tilde = np.asarray(self.mu_tilde, dtype=float)
        if not (np.isfinite(self.c_tilde).all() and np.isfinite(self.mu_tilde).all()):
            raise ValueError("non-finite value in simulation state")

    def flatten(self):
        return np.concatenate([self.c_tilde.ravel(), self.mu_tilde])

    @classmethod
    def from_flat(cls, t, vec, grid: PolarGrid):
        n = grid.n_cells
        return cls(t, vec[:n].reshape(grid.n_r, grid.n_theta), vec[n:].copy())


def upwind_flux(u, x_minus, x_plus):
    """u*x_minus where u > 0, u*x_plus where u < 0, zero at u = 0."""
    u = np.asarray(u, dtype=float)
    return np.maximum(u, 0.0) * x_minus + np.minimum(u, 0.0) * x_plus


def _check_u(u: FaceVelocityField, grid: PolarGrid):
    if u.u_rad.shape != (grid.n_r + 1, grid.n_theta) or u.u_ang.shape != (grid.n_r, grid.n_theta):
        raise DimensionMismatch(
            f"face velocity shapes {u.u_rad.shape}/{u.u_ang.shape} do not match grid "
            f"({grid.n_r}+1, {grid.n_theta})"
        )


def assemble_diffusion_operator(grid: PolarGrid, params: PhysParams) -> SparseMatrix:
    """Implicit operator A: radial/angular diffusion, zero-flux inner closure,
    membrane exchange at the outer boundary, all scaled for the dt/dr^2 prefactor."""
    n_r, n_t = grid.n_r, grid.n_theta
    rc = grid.r_centers
    rf = grid.r_faces
    D = params.D
    ks = np.arange(n_t)

    rows, cols, vals = [], [], []

    def add(r, c, v):
        rows.append(np.asarray(r))
        cols.append(np.asarray(c))
        vals.append(np.broadcast_to(v, np.asarray(r).shape).astype(float))

    # interior radial faces (inner boundary face carries zero total flux)
    for f in range(1, n_r):
        lo = ks + (f - 1) * n_t
        hi = ks + f * n_t
        a_lo = D * rf[f] / rc[f - 1]
        a_hi = D * rf[f] / rc[f]
        add(lo, lo, a_lo)
        add(lo, hi, -a_hi)
        add(hi, hi, a_hi)
        add(hi, lo, -a_lo)
    # angular faces, ring by ring
    for j in range(n_r):
        t_j = D * grid.dr ** 2 / (rc[j] ** 2 * grid.dtheta ** 2)
        left = ks + j * n_t
        right = (ks + 1) % n_t + j * n_t
        add(left, left, t_j)
        add(left, right, -t_j)
        add(right, right, t_j)
        add(right, left, -t_j)
    # membrane exchange across the outer boundary
    c_out = ks + (n_r - 1) * n_t
    mu = ks + n_r * n_t
    ex_on = grid.dr * params.k_on
    ex_off = grid.dr * params.k_off
    add(c_out, c_out, ex_on)
    add(c_out, mu, -ex_off)
    add(mu, mu, grid.dr * ex_off)
    add(mu, c_out, -grid.dr * ex_on)

    n = (n_r + 1) * n_t
    return SparseMatrix.from_coo(
        n, n, np.concatenate(rows), np.concatenate(cols), np.concatenate(vals)
    )


def assemble_advection_operator(u: FaceVelocityField, grid: PolarGrid) -> SparseMatrix:
    """Explicit upwind operator B, scaled for the dt/dr prefactor.

    Boundary radial faces are excluded: the inner closure is zero total
    flux and the outer total flux is the (implicit) membrane exchange.
    Boundary rows are zero.
    """
    _check_u(u, grid)
    n_r, n_t = grid.n_r, grid.n_theta
    ks = np.arange(n_t)

    rows, cols, vals = [], [], []

    def add(r, c, v):
        rows.append(np.asarray(r))
        cols.append(np.asarray(c))
        vals.append(np.asarray(v, dtype=float))

    for f in range(1, n_r):
        up = np.maximum(u.u_rad[f], 0.0)
        um = np.minimum(u.u_rad[f], 0.0)
        lo = ks + (f - 1) * n_t
        hi = ks + f * n_t
        add(lo, lo, up)
        add(lo, hi, um)
        add(hi, lo, -up)
        add(hi, hi, -um)
    s = grid.dr / (grid.r_centers ** 2 * grid.dtheta)
    for j in range(n_r):
        up = s[j] * np.maximum(u.u_ang[j], 0.0)
        um = s[j] * np.minimum(u.u_ang[j], 0.0)
        left = ks + j * n_t
        right = (ks + 1) % n_t + j * n_t
        add(left, left, up)
        add(left, right, um)
        add(right, left, -up)
        add(right, right, -um)

    n = (n_r + 1) * n_t
    return SparseMatrix.from_coo(
        n, n, np.concatenate(rows), np.concatenate(cols), np.concatenate(vals)
    )


def advective_cfl(u: FaceVelocityField, dt, grid: PolarGrid):
    """Largest per-cell outflow number of the explicit update.

    Values <= 1 guarantee that the explicit advection stage maps
    nonnegative states to nonnegative states.
    """
    _check_u(u, grid)
    out_rad = np.zeros((grid.n_r, grid.n_theta))
    out_rad[:-1, :] += np.maximum(u.u_rad[1:-1, :], 0.0)   # outflow through the outer face
    out_rad[1:, :] += np.maximum(-u.u_rad[1:-1, :], 0.0)   # outflow through the inner face
    out_ang = np.maximum(u.u_ang, 0.0) + np.maximum(-np.roll(u.u_ang, 1, axis=1), 0.0)
    per_cell = out_rad / grid.dr + out_ang / (grid.r_centers[:, None] ** 2 * grid.dtheta)
    return float(dt * per_cell.max())


class TransportStepper:
    """Cached implicit factorization for repeated IMEX steps.

    The implicit matrix I + (dt/dr^2) A depends only on (grid, params, dt)
    and is factored once; the advection operator is rebuilt every step.
    """

    def __init__(self, grid: PolarGrid, params: PhysParams, dt, tol=1e-12):
        if dt <= 0.0:
            raise ValueError("dt must be positive")
        self.grid = grid
        self.params = params
        self.dt = float(dt)
        self.tol = tol
        self.A = assemble_diffusion_operator(grid, params)
        n = (grid.n_r + 1) * grid.n_theta
        M = sp.identity(n, format="csr") + (self.dt / grid.dr ** 2) * self.A.csr
        self._lu = DirectFactorization(SparseMatrix(M.tocsr()))
        self._cfl_warned = False

    def step(self, state: SimState, u: FaceVelocityField):
        grid = self.grid
        if state.c_tilde.shape != (grid.n_r, grid.n_theta) or state.mu_tilde.shape != (grid.n_theta,):
            raise DimensionMismatch("state shapes do not match grid")
        B = assemble_advection_operator(u, grid)
        e_old = state.flatten()
        rhs = e_old - (self.dt / grid.dr) * B.matvec(e_old)
        e_new, report = self._lu.solve(rhs, tol=self.tol)
        cfl = advective_cfl(u, self.dt, grid)
        if cfl > 1.0 and not self._cfl_warned:
            self._cfl_warned = True
            warnings.warn(f"advective CFL {cfl:.3f} exceeds 1; positivity is not guaranteed")
        return SimState.from_flat(state.t + self.dt, e_new, grid), report, cfl


def imex_step(state: SimState, A: SparseMatrix, u: FaceVelocityField, dt, grid: PolarGrid,
              params: PhysParams, tol=1e-12) -> SimState:
    """Single IMEX step with a pre-assembled diffusion operator A.

    Builds and factors the implicit matrix on the fly; use
    :class:`TransportStepper` when stepping repeatedly.
    """
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    n = (grid.n_r + 1) * grid.n_theta
    if A.n_rows != n or A.n_cols != n:
        raise DimensionMismatch("diffusion operator size does not match grid")
    M = sp.identity(n, format="csr") + (dt / grid.dr ** 2) * A.csr
    B = assemble_advection_operator(u, grid)
    e_old = state.flatten()
    rhs = e_old - (dt / grid.dr) * B.matvec(e_old)
    e_new, _ = DirectFactorization(SparseMatrix(M.tocsr())).solve(rhs, tol=tol)
    return SimState.from_flat(state.t + dt, e_new, grid)
