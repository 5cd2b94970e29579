"""Discrete Poisson problem for the scaled pressure on the annulus.

The unknown is p_tilde = r * p on cell centers.  The outer circle carries
the Dirichlet value [1 - delta*mu/R]_+ (through the boundary concentration
mu_tilde) and the inner circle carries p = 0.  Two boundary closures are
provided:

* mode "paper": the Dirichlet data is imposed at ghost-cell centers one
  full dr outside the physical faces, with the ghost value scaled by the
  outermost center radius.  First-order accurate at the boundary.
* mode "face": the Dirichlet data is imposed at the physical faces with a
  half-cell flux distance.  Second-order; used for convergence studies.
"""

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import DimensionMismatch
from .grid import PolarGrid
from .sparse import DirectFactorization, SolveReport, SparseMatrix, conjugate_gradient

BOUNDARY_MODES = ("paper", "face")


@dataclass(frozen=True)
class PhysParams:
    """Physical rates of the migration model."""

    k_d: float = 1.0      # bulk depolymerization rate
    delta: float = 2.0    # strength of polymerization inhibition
    gamma: float = 2.0    # friction/mobility factor in the domain velocity
    D: float = 1.0        # molecular diffusion coefficient
    k_on: float = 0.3     # membrane activation rate
    k_off: float = 1.0    # membrane deactivation rate

    def __post_init__(self):
        for name in ("k_d", "delta", "gamma", "D", "k_on", "k_off"):
            if getattr(self, name) < 0.0:
                raise ValueError(f"{name} must be nonnegative")
        if self.D <= 0.0:
            raise ValueError("D must be positive")


@dataclass
class PressureField:
    """Scaled pressure p_tilde on cells, shape (n_r, n_theta)."""

    values: np.ndarray
    grid: PolarGrid

    def pressure(self):
        """Unscaled pressure p = p_tilde / r."""
        return self.values / self.grid.r_centers[:, None]


def _check_mode(mode):
    if mode not in BOUNDARY_MODES:
        raise ValueError(f"boundary mode must be one of {BOUNDARY_MODES}, got {mode!r}")


def assemble_pressure_operator(grid: PolarGrid, mode="paper") -> SparseMatrix:
    """Operator L with L @ p_tilde = rhs, assembled face by face.

    Radial couplings are -r_face/(r_neighbor*dr^2), angular couplings
    -1/(r_j^2 dtheta^2) with periodic wrap; boundary faces contribute only
    to the diagonal (their Dirichlet data lands in the right-hand side).
    """
    _check_mode(mode)
    n_r, n_t = grid.n_r, grid.n_theta
    dr2 = grid.dr * grid.dr
    rc = grid.r_centers
    rf = grid.r_faces

    rows, cols, vals = [], [], []

    def add(r, c, v):
        rows.append(r)
        cols.append(c)
        vals.append(v)

    ks = np.arange(n_t)
    # interior radial faces between rings j-1 and j
    for f in range(1, n_r):
        cf = rf[f] / dr2
        lo = ks + (f - 1) * n_t
        hi = ks + f * n_t
        a_lo = cf / rc[f - 1]
        a_hi = cf / rc[f]
        add(lo, lo, np.full(n_t, a_lo))
        add(lo, hi, np.full(n_t, -a_hi))
        add(hi, hi, np.full(n_t, a_hi))
        add(hi, lo, np.full(n_t, -a_lo))
    # boundary faces: ghost distance dr in mode paper, dr/2 in mode face
    bscale = 1.0 if mode == "paper" else 2.0
    inner = ks
    add(inner, inner, np.full(n_t, bscale * rf[0] / (rc[0] * dr2)))
    outer = ks + (n_r - 1) * n_t
    add(outer, outer, np.full(n_t, bscale * rf[n_r] / (rc[n_r - 1] * dr2)))
    # angular faces, ring by ring
    for j in range(n_r):
        a = 1.0 / (rc[j] ** 2 * grid.dtheta ** 2)
        left = ks + j * n_t
        right = (ks + 1) % n_t + j * n_t
        add(left, left, np.full(n_t, a))
        add(left, right, np.full(n_t, -a))
        add(right, right, np.full(n_t, a))
        add(right, left, np.full(n_t, -a))

    n = n_r * n_t
    return SparseMatrix.from_coo(
        n, n, np.concatenate(rows), np.concatenate(cols), np.concatenate(vals)
    )


def boundary_bracket(mu_tilde, grid: PolarGrid, params: PhysParams, mode="paper"):
    """Clamped polymerization factor [1 - delta*mu]_+ along the outer circle.

    Mode paper evaluates mu = mu_tilde / r_{N_r} (outermost center radius,
    matching the ghost-value closure); mode face uses mu = mu_tilde / R.
    """
    _check_mode(mode)
    mu_tilde = np.asarray(mu_tilde, dtype=float)
    if mu_tilde.shape != (grid.n_theta,):
        raise DimensionMismatch(f"mu_tilde must have {grid.n_theta} entries, got {mu_tilde.shape}")
    r_ref = grid.r_centers[-1] if mode == "paper" else grid.R
    return np.maximum(1.0 - params.delta * mu_tilde / r_ref, 0.0)


def assemble_pressure_rhs(grid: PolarGrid, mu_tilde, params: PhysParams, mode="paper"):
    """Right-hand side: -k_d * r_j per cell plus the outer Dirichlet flux term."""
    _check_mode(mode)
    bracket = boundary_bracket(mu_tilde, grid, params, mode)
    rhs = np.repeat(-params.k_d * grid.r_centers, grid.n_theta)
    dr2 = grid.dr * grid.dr
    outer = slice((grid.n_r - 1) * grid.n_theta, grid.n_r * grid.n_theta)
    if mode == "paper":
        coef = grid.r_centers[-1] * grid.r_faces[-1] / (grid.r_ghost_outer * dr2)
    else:
        coef = 2.0 * grid.r_faces[-1] / dr2
    rhs[outer] += coef * bracket
    return rhs


class PressureProblem:
    """Assembled pressure operator with a cached direct factorization.

    The operator depends only on the grid and mode, so one instance is
    reused for every time step; only the right-hand side changes.  The
    iterative path right-scales by the cell radii, which turns the operator
    into a symmetric positive definite matrix solvable by plain CG.
    """

    def __init__(self, grid: PolarGrid, params: PhysParams, mode="paper", tol=1e-12, method="direct"):
        _check_mode(mode)
        self.grid = grid
        self.params = params
        self.mode = mode
        self.tol = tol
        self.method = method
        self.operator = assemble_pressure_operator(grid, mode)
        if method == "direct":
            self._lu = DirectFactorization(self.operator)
            self._sym = None
        elif method == "iterative":
            self._lu = None
            r_cell = np.repeat(grid.r_centers, grid.n_theta)
            self._r_cell = r_cell
            sym = self.operator.csr @ sp.diags(r_cell)
            self._sym = SparseMatrix(sym.tocsr())
        else:
            raise ValueError(f"unknown method {method!r}")

    def solve(self, mu_tilde):
        rhs = assemble_pressure_rhs(self.grid, mu_tilde, self.params, self.mode)
        if self._lu is not None:
            x, report = self._lu.solve(rhs, tol=self.tol)
        else:
            q, report = conjugate_gradient(self._sym, rhs, tol=self.tol)
            x = self._r_cell * q
        field = PressureField(x.reshape(self.grid.n_r, self.grid.n_theta), self.grid)
        return field, report


def solve_pressure(grid: PolarGrid, mu_tilde, params: PhysParams, mode="paper", tol=1e-12, method="direct"):
    """One-shot pressure solve; returns the scaled field p_tilde."""
    field, _ = PressureProblem(grid, params, mode=mode, tol=tol, method=method).solve(mu_tilde)
    return field
