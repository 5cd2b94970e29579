"""Nonlocal cell velocity and upwind face velocities.

The cell velocity v is a boundary integral of the clamped polymerization
factor; the fluid velocity u = -grad p - v is sampled at cell faces in the
scaled polar convention u_r = u . e_r and u_theta = r * (u . e_theta).
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DimensionMismatch
from .grid import PolarGrid
from .pressure import PhysParams, PressureField


class CellVelocity(NamedTuple):
    v_x: float
    v_y: float


@dataclass
class FaceVelocityField:
    """Face-sampled fluid velocity.

    u_rad has shape (n_r + 1, n_theta): entry [f, k] lives on the radial
    face at r_faces[f] and angle theta_k.  The two boundary slices ([0] and
    [n_r]) carry only the -v_r part (their pressure difference would need
    ghost data) and are never consumed by the transport scheme, whose
    boundary closures replace the total flux.

    u_ang has shape (n_r, n_theta): entry [j, i] lives on the angular face
    between sectors i and i+1 (mod n_theta) of ring j.
    """

    u_rad: np.ndarray
    u_ang: np.ndarray


def cell_velocity(mu_tilde, grid: PolarGrid, params: PhysParams) -> CellVelocity:
    """Discrete boundary integral gamma * dtheta * sum_k [1 - delta*mu/R]_+ n(theta_k)."""
    mu_tilde = np.asarray(mu_tilde, dtype=float)
    if mu_tilde.shape != (grid.n_theta,):
        raise DimensionMismatch(f"mu_tilde must have {grid.n_theta} entries, got {mu_tilde.shape}")
    bracket = np.maximum(1.0 - params.delta * mu_tilde / grid.R, 0.0)
    theta = grid.theta_centers
    v_x = params.gamma * grid.dtheta * np.sum(bracket * np.cos(theta))
    v_y = params.gamma * grid.dtheta * np.sum(bracket * np.sin(theta))
    return CellVelocity(float(v_x), float(v_y))


def face_velocities(p: PressureField, v: CellVelocity, grid: PolarGrid) -> FaceVelocityField:
    if p.values.shape != (grid.n_r, grid.n_theta):
        raise DimensionMismatch(f"pressure shape {p.values.shape} does not match grid")
    q = p.values / grid.r_centers[:, None]  # unscaled pressure p
    theta_c = grid.theta_centers
    theta_f = grid.theta_faces
    cos_c, sin_c = np.cos(theta_c), np.sin(theta_c)

    # radial faces at cell-center angles: v_r = v . e_r(theta_k)
    v_r = v.v_x * cos_c + v.v_y * sin_c
    u_rad = np.empty((grid.n_r + 1, grid.n_theta))
    u_rad[1:-1, :] = -(q[1:, :] - q[:-1, :]) / grid.dr - v_r[None, :]
    u_rad[0, :] = -v_r
    u_rad[-1, :] = -v_r

    # angular faces at theta_{k+1/2}: v_theta = r_j * (v . e_theta)
    v_t_unit = -v.v_x * np.sin(theta_f) + v.v_y * np.cos(theta_f)
    dp = np.roll(p.values, -1, axis=1) - p.values
    u_ang = -dp / (grid.r_centers[:, None] * grid.dtheta) - grid.r_centers[:, None] * v_t_unit[None, :]
    return FaceVelocityField(u_rad, u_ang)
