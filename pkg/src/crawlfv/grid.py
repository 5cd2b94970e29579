"""Annulus geometry in polar coordinates.

Cells are indexed by (j, k) with j the radial ring and k the angular
sector, both 0-based.  The linear (flattened) ordering runs angle-fastest:
cell (j, k) sits at position k + j * n_theta.  All assembled operators in
this package share that ordering, with boundary unknowns (when present)
appended after the last ring.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import IndexOutOfRange, InvertedRadii, NonPositiveRadius, TooFewCells


@dataclass(frozen=True, eq=False)
class PolarGrid:
    """Uniform polar mesh of the annulus R_min < r < R.

    Radial faces sit at R_min + j*dr (j = 0..n_r), so the outermost face
    coincides with R exactly.  Cell centers sit midway between faces.
    Angular cell centers follow theta_k = (k+1)*dtheta; the angular "plus"
    face of sector k (shared with sector k+1 mod n_theta) is at
    theta_k + dtheta/2.
    """

    R_min: float
    R: float
    n_r: int
    n_theta: int
    dr: float = field(init=False)
    dtheta: float = field(init=False)
    r_centers: np.ndarray = field(init=False)
    r_faces: np.ndarray = field(init=False)
    theta_centers: np.ndarray = field(init=False)
    theta_faces: np.ndarray = field(init=False)

    def __post_init__(self):
        if self.R_min <= 0.0 or self.R <= 0.0:
            raise NonPositiveRadius(f"radii must be positive, got R_min={self.R_min}, R={self.R}")
        if self.R_min >= self.R:
            raise InvertedRadii(f"need R_min < R, got R_min={self.R_min}, R={self.R}")
        if self.n_r < 2:
            raise TooFewCells(f"need n_r >= 2, got {self.n_r}")
        if self.n_theta < 3:
            raise TooFewCells(f"need n_theta >= 3, got {self.n_theta}")
        dr = (self.R - self.R_min) / self.n_r
        dtheta = 2.0 * np.pi / self.n_theta
        object.__setattr__(self, "dr", dr)
        object.__setattr__(self, "dtheta", dtheta)
        # linspace pins the outer face to R exactly
        r_faces = np.linspace(self.R_min, self.R, self.n_r + 1)
        r_centers = self.R_min + (np.arange(self.n_r) + 0.5) * dr
        theta_centers = (np.arange(self.n_theta) + 1.0) * dtheta
        theta_faces = theta_centers + 0.5 * dtheta
        for name, arr in (
            ("r_faces", r_faces),
            ("r_centers", r_centers),
            ("theta_centers", theta_centers),
            ("theta_faces", theta_faces),
        ):
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    @property
    def n_cells(self):
        return self.n_r * self.n_theta

    @property
    def r_ghost_inner(self):
        """Center radius of the fictitious ring just inside R_min."""
        return self.R_min - 0.5 * self.dr

    @property
    def r_ghost_outer(self):
        """Center radius of the fictitious ring just outside R."""
        return self.R + 0.5 * self.dr


def build_grid(R_min, R, n_r, n_theta) -> PolarGrid:
    """Construct and validate a :class:`PolarGrid`."""
    return PolarGrid(float(R_min), float(R), int(n_r), int(n_theta))


def flatten_index(j, k, n_theta):
    """Linear index of cell (j, k): k + j*n_theta, angle-fastest (0-based)."""
    if k < 0 or k >= n_theta or j < 0:
        raise IndexOutOfRange(f"cell index (j={j}, k={k}) invalid for n_theta={n_theta}")
    return k + j * n_theta


def theta_neighbor(k, offset, n_theta):
    """Angular neighbor index with periodic wrap-around."""
    if k < 0 or k >= n_theta:
        raise IndexOutOfRange(f"angular index {k} out of range for n_theta={n_theta}")
    return (k + offset) % n_theta
