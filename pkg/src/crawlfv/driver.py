"""Coupled time loop: pressure solve, velocities, IMEX transport step.

Each step resolves, from the current (c_tilde, mu_tilde): the pressure
field, the nonlocal cell velocity, the upwind face velocities, and finally
the transported state.  Diagnostics (mass, velocity, CFL, solver residuals)
are recorded per step, and a trailing-window criterion on mu_tilde detects
the numerical steady state.
"""

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import BadValue, NonFiniteState
from .grid import PolarGrid, build_grid
from .pressure import PhysParams, PressureProblem
from .transport import SimState, TransportStepper
from .velocity import CellVelocity, cell_velocity, face_velocities

DIVERGENCE_CAP = 1e12
PRESETS = ("polarised", "uniform")
SS_NORMS = ("linf", "l2")


@dataclass
class Config:
    """Full run description: grid, physics, numerics, detection, outputs."""

    R_min: float = 0.5
    R: float = 1.5
    N_r: int = 19
    N_theta: int = 120
    k_d: float = 1.0
    delta: float = 2.0
    gamma: float = 2.0
    D: float = 1.0
    k_on: float = 0.3
    k_off: float = 1.0
    dt: float = 1e-2
    t_max: float = 200.0
    mode: str = "paper"
    method: str = "direct"
    tol: float = 1e-12
    T_ss: float = 1.0
    eps_ss: float = 1e-8
    ss_norm: str = "linf"
    preset: str = "polarised"
    ic_file: str = ""
    ic_mu_file: str = ""
    snapshot_every: int = 0
    outdir: str = "out"
    write_timeseries: bool = True
    dr_list: tuple = ()
    dt_list: tuple = ()
    kon_list: tuple = ()
    workers: int = 1

    def __post_init__(self):
        if self.dt <= 0.0:
            raise BadValue("dt must be positive")
        if self.t_max <= 0.0:
            raise BadValue("t_max must be positive")
        if self.T_ss <= 0.0 or self.eps_ss <= 0.0:
            raise BadValue("T_ss and eps_ss must be positive")
        if self.preset not in PRESETS:
            raise BadValue(f"preset must be one of {PRESETS}, got {self.preset!r}")
        if self.ss_norm not in SS_NORMS:
            raise BadValue(f"ss_norm must be one of {SS_NORMS}, got {self.ss_norm!r}")

    def grid(self) -> PolarGrid:
        return build_grid(self.R_min, self.R, self.N_r, self.N_theta)

    def params(self) -> PhysParams:
        return PhysParams(k_d=self.k_d, delta=self.delta, gamma=self.gamma,
                          D=self.D, k_on=self.k_on, k_off=self.k_off)


@dataclass
class DiagnosticsRow:
    step: int
    t: float
    mass: float
    v_x: float
    v_y: float
    polarization: float
    cfl: float
    residual_pressure: float
    residual_transport: float


@dataclass
class Diagnostics:
    rows: list = field(default_factory=list)

    def append(self, row: DiagnosticsRow):
        self.rows.append(row)

    def max_mass_drift(self):
        """Largest relative departure from the initial mass."""
        if not self.rows:
            return 0.0
        m0 = self.rows[0].mass
        if m0 == 0.0:
            return max(abs(r.mass) for r in self.rows)
        return max(abs(r.mass - m0) / abs(m0) for r in self.rows)


@dataclass
class SteadyReport:
    t_steady: Optional[float]
    polarization: float
    max_mass_drift: float


@dataclass
class SimResult:
    state: SimState
    diagnostics: Diagnostics
    steady: SteadyReport


def total_mass(state: SimState, grid: PolarGrid):
    """Discrete mass  dr*dtheta*sum(c_tilde) + dtheta*sum(mu_tilde)."""
    return float(grid.dr * grid.dtheta * np.sum(state.c_tilde)
                 + grid.dtheta * np.sum(state.mu_tilde))


def polarization(v: CellVelocity):
    return math.hypot(v.v_x, v.v_y)


def _mu_distance(a, b, grid: PolarGrid, norm):
    d = np.abs(a - b)
    if norm == "linf":
        return float(d.max())
    return float(np.sqrt(grid.dtheta * np.sum(d * d)))


def steady_state_reached(times, mu_history, T_ss, eps_ss, norm="linf", grid: PolarGrid = None):
    """Earliest time t such that every recorded sample in (t, t + T_ss]
    stays within eps_ss of mu(t); None if no such time exists.

    A candidate needs at least one later sample inside its window, so a
    still-moving trajectory is never declared steady at its final sample.
    """
    times = list(times)
    mu_history = [np.asarray(m, dtype=float) for m in mu_history]
    n = len(times)
    for i in range(n):
        checked = 0
        ok = True
        for s in range(i + 1, n):
            if times[s] - times[i] > T_ss:
                break
            if norm == "linf" or grid is None:
                dist = float(np.abs(mu_history[s] - mu_history[i]).max())
            else:
                dist = _mu_distance(mu_history[s], mu_history[i], grid, norm)
            if dist > eps_ss:
                ok = False
                break
            checked += 1
        if ok and checked:
            return times[i]
    return None


class _SteadyTracker:
    """Incremental steady-state detector.

    Keeps a candidate sample and resets it whenever the current state
    drifts beyond eps_ss; the system is declared steady at the candidate
    time once it has survived a full window T_ss.  For trajectories that
    settle monotonically this matches the offline scan up to one reset.
    """

    def __init__(self, grid, T_ss, eps_ss, norm):
        self.grid = grid
        self.T_ss = T_ss
        self.eps_ss = eps_ss
        self.norm = norm
        self.t_cand = None
        self.mu_cand = None
        self.pol_cand = 0.0

    def update(self, t, mu_tilde, pol):
        if self.t_cand is None or _mu_distance(mu_tilde, self.mu_cand, self.grid, self.norm) > self.eps_ss:
            self.t_cand = t
            self.mu_cand = mu_tilde.copy()
            self.pol_cand = pol
            return None
        if t - self.t_cand >= self.T_ss:
            return self.t_cand
        return None


@dataclass
class CoupledOperators:
    """Operators cached for a whole run (grid-, params- and dt-bound)."""

    grid: PolarGrid
    params: PhysParams
    pressure: PressureProblem
    transport: TransportStepper

    @classmethod
    def from_config(cls, config: Config):
        grid = config.grid()
        params = config.params()
        return cls(
            grid=grid,
            params=params,
            pressure=PressureProblem(grid, params, mode=config.mode,
                                     tol=config.tol, method=config.method),
            transport=TransportStepper(grid, params, config.dt, tol=config.tol),
        )


def coupled_step(state: SimState, ops: CoupledOperators, config: Config):
    """Advance one step; returns the new state and its diagnostics row."""
    p_field, rep_p = ops.pressure.solve(state.mu_tilde)
    v = cell_velocity(state.mu_tilde, ops.grid, ops.params)
    u = face_velocities(p_field, v, ops.grid)
    new_state, rep_t, cfl = ops.transport.step(state, u)
    row = DiagnosticsRow(
        step=0,  # filled by the caller
        t=new_state.t,
        mass=total_mass(new_state, ops.grid),
        v_x=v.v_x,
        v_y=v.v_y,
        polarization=polarization(v),
        cfl=cfl,
        residual_pressure=rep_p.residual_norm,
        residual_transport=rep_t.residual_norm,
    )
    return new_state, row


def initial_state(config: Config, grid: PolarGrid) -> SimState:
    if config.ic_file or config.ic_mu_file:
        from . import output

        if not (config.ic_file and config.ic_mu_file):
            raise BadValue("tabulated initial conditions need both ic_file and ic_mu_file")
        c0 = output.read_field_snapshot(config.ic_file, grid)
        mu0 = output.read_mu_snapshot(config.ic_mu_file, grid)
        return SimState(0.0, c0, mu0)
    theta = grid.theta_centers
    if config.preset == "polarised":
        profile = np.cos(theta - np.pi) + 1.0
        c0 = np.tile(profile, (grid.n_r, 1))
        mu0 = 0.5 * profile
    else:  # uniform: c = 1 with equilibrated membrane concentration
        c0 = np.tile(grid.r_centers[:, None], (1, grid.n_theta))
        mu0 = np.full(grid.n_theta,
                      (config.k_on / config.k_off) * grid.r_centers[-1] if config.k_off > 0 else 0.0)
    return SimState(0.0, c0, mu0)


def _check_finite(state: SimState):
    for arr in (state.c_tilde, state.mu_tilde):
        if not np.isfinite(arr).all() or np.abs(arr).max() > DIVERGENCE_CAP:
            raise NonFiniteState(f"state diverged at t={state.t:.6g}")


def run_simulation(config: Config, write_outputs=True) -> SimResult:
    """Advance the coupled system until t_max or numerical steady state.

    Writes meta.txt, snapshots and timeseries.csv into config.outdir when
    write_outputs is set.  On divergence, everything recorded so far is
    flushed before NonFiniteState propagates.
    """
    from . import output

    ops = CoupledOperators.from_config(config)
    grid = ops.grid
    state = initial_state(config, grid)
    _check_finite(state)

    writer = output.OutputBundle(config) if write_outputs else None
    if writer is not None:
        writer.write_meta()

    diag = Diagnostics()
    v0 = cell_velocity(state.mu_tilde, grid, ops.params)
    diag.append(DiagnosticsRow(0, 0.0, total_mass(state, grid),
                               v0.v_x, v0.v_y, polarization(v0), 0.0, 0.0, 0.0))
    tracker = _SteadyTracker(grid, config.T_ss, config.eps_ss, config.ss_norm)
    tracker.update(0.0, state.mu_tilde, polarization(v0))

    if writer is not None and config.snapshot_every > 0:
        writer.write_snapshot(state, grid, 0)

    n_steps = int(math.ceil(config.t_max / config.dt - 1e-12))
    t_steady = None
    try:
        for n in range(1, n_steps + 1):
            state, row = coupled_step(state, ops, config)
            _check_finite(state)
            row.step = n
            diag.append(row)
            if writer is not None and config.snapshot_every > 0 and n % config.snapshot_every == 0:
                writer.write_snapshot(state, grid, n)
            pol_now = polarization(cell_velocity(state.mu_tilde, grid, ops.params))
            t_steady = tracker.update(state.t, state.mu_tilde, pol_now)
            if t_steady is not None:
                break
    finally:
        if writer is not None:
            if config.write_timeseries:
                writer.write_timeseries(diag)
            writer.write_snapshot(state, grid, diag.rows[-1].step)

    pol_at_steady = tracker.pol_cand if t_steady is not None else diag.rows[-1].polarization
    report = SteadyReport(t_steady, pol_at_steady, diag.max_mass_drift())
    return SimResult(state, diag, report)
