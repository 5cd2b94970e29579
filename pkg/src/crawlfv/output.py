"""Flat key=value configuration files and CSV emission.

All numeric CSV columns are written in full-precision scientific notation
so that identical configs reproduce byte-identical files and snapshots
round-trip exactly.  meta.txt echoes the fully resolved config in the same
key=value syntax accepted by parse_config.
"""

import dataclasses
import os

import numpy as np

from .driver import Config, Diagnostics
from .errors import BadValue, DimensionMismatch, IoError, MissingFile, UnknownKey
from .grid import PolarGrid
from .transport import SimState

_FLOAT_FIELDS = {"R_min", "R", "k_d", "delta", "gamma", "D", "k_on", "k_off",
                 "dt", "t_max", "tol", "T_ss", "eps_ss"}
_INT_FIELDS = {"N_r", "N_theta", "snapshot_every", "workers"}
_STR_FIELDS = {"mode", "method", "ss_norm", "preset", "ic_file", "ic_mu_file", "outdir"}
_BOOL_FIELDS = {"write_timeseries"}
_LIST_FIELDS = {"dr_list", "dt_list", "kon_list"}
_ALL_FIELDS = _FLOAT_FIELDS | _INT_FIELDS | _STR_FIELDS | _BOOL_FIELDS | _LIST_FIELDS


def _fmt(x):
    return f"{x:.17e}"


def _parse_value(key, raw, lineno):
    try:
        if key in _FLOAT_FIELDS:
            return float(raw)
        if key in _INT_FIELDS:
            return int(raw)
        if key in _BOOL_FIELDS:
            low = raw.strip().lower()
            if low in ("true", "1", "yes"):
                return True
            if low in ("false", "0", "no"):
                return False
            raise ValueError(raw)
        if key in _LIST_FIELDS:
            raw = raw.strip()
            if not raw:
                return ()
            return tuple(float(tok) for tok in raw.split(","))
        return raw.strip()
    except ValueError as exc:
        raise BadValue(f"line {lineno}: cannot parse value for {key}: {raw!r}") from exc


def parse_config(path) -> Config:
    """Read a flat key=value config; unknown keys are rejected with their line."""
    if not os.path.isfile(path):
        raise MissingFile(f"config file not found: {path}")
    values = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            if "=" not in stripped:
                raise BadValue(f"line {lineno}: expected key = value, got {stripped!r}")
            key, raw = stripped.split("=", 1)
            key = key.strip()
            if key not in _ALL_FIELDS:
                raise UnknownKey(f"line {lineno}: unknown key {key!r}")
            values[key] = _parse_value(key, raw, lineno)
    outdir_env = os.environ.get("CRAWLFV_OUTDIR")
    if outdir_env:
        values["outdir"] = outdir_env
    return Config(**values)


def write_config_echo(config: Config, path):
    """Echo the resolved config as a parse_config-compatible file."""
    lines = []
    for f in dataclasses.fields(config):
        val = getattr(config, f.name)
        if f.name in _FLOAT_FIELDS:
            text = repr(float(val))
        elif f.name in _LIST_FIELDS:
            text = ",".join(repr(float(v)) for v in val)
        elif f.name in _BOOL_FIELDS:
            text = "true" if val else "false"
        else:
            text = str(val)
        lines.append(f"{f.name} = {text}\n")
    with open(path, "w") as fh:
        fh.writelines(lines)


def write_snapshot(state: SimState, grid: PolarGrid, step, outdir):
    """Write field_<step>.csv (j,k,r,theta,c_tilde,c) and mu_<step>.csv
    (k,theta,mu_tilde,mu).  Indices are 1-based ring/sector numbers."""
    try:
        os.makedirs(outdir, exist_ok=True)
        field_path = os.path.join(outdir, f"field_{step:06d}.csv")
        with open(field_path, "w") as fh:
            fh.write("j,k,r,theta,c_tilde,c\n")
            for j in range(grid.n_r):
                r = grid.r_centers[j]
                for k in range(grid.n_theta):
                    ct = state.c_tilde[j, k]
                    fh.write(f"{j + 1},{k + 1},{_fmt(r)},{_fmt(grid.theta_centers[k])},"
                             f"{_fmt(ct)},{_fmt(ct / r)}\n")
        mu_path = os.path.join(outdir, f"mu_{step:06d}.csv")
        with open(mu_path, "w") as fh:
            fh.write("k,theta,mu_tilde,mu\n")
            for k in range(grid.n_theta):
                mt = state.mu_tilde[k]
                fh.write(f"{k + 1},{_fmt(grid.theta_centers[k])},{_fmt(mt)},{_fmt(mt / grid.R)}\n")
        return field_path, mu_path
    except OSError as exc:
        raise IoError(str(exc)) from exc


def read_field_snapshot(path, grid: PolarGrid):
    """Recover c_tilde from a field snapshot (bit-exact round trip)."""
    if not os.path.isfile(path):
        raise MissingFile(f"snapshot not found: {path}")
    data = np.genfromtxt(path, delimiter=",", names=True)
    expected = ("j", "k", "r", "theta", "c_tilde", "c")
    if data.dtype.names != expected:
        raise BadValue(f"snapshot columns {data.dtype.names} != {expected}")
    c = np.empty((grid.n_r, grid.n_theta))
    j = data["j"].astype(int) - 1
    k = data["k"].astype(int) - 1
    if j.size != grid.n_cells:
        raise DimensionMismatch(f"snapshot has {j.size} rows for a {grid.n_cells}-cell grid")
    c[j, k] = data["c_tilde"]
    return c


def read_mu_snapshot(path, grid: PolarGrid):
    if not os.path.isfile(path):
        raise MissingFile(f"snapshot not found: {path}")
    data = np.genfromtxt(path, delimiter=",", names=True)
    expected = ("k", "theta", "mu_tilde", "mu")
    if data.dtype.names != expected:
        raise BadValue(f"snapshot columns {data.dtype.names} != {expected}")
    if data["k"].size != grid.n_theta:
        raise DimensionMismatch(f"snapshot has {data['k'].size} rows for n_theta={grid.n_theta}")
    mu = np.empty(grid.n_theta)
    mu[data["k"].astype(int) - 1] = data["mu_tilde"]
    return mu


TIMESERIES_COLUMNS = ("step", "t", "mass", "v_x", "v_y", "polarization",
                      "cfl", "residual_pressure", "residual_transport")


def write_timeseries(diag: Diagnostics, outdir):
    try:
        os.makedirs(outdir, exist_ok=True)
        path = os.path.join(outdir, "timeseries.csv")
        with open(path, "w") as fh:
            fh.write(",".join(TIMESERIES_COLUMNS) + "\n")
            for r in diag.rows:
                fh.write(f"{r.step},{_fmt(r.t)},{_fmt(r.mass)},{_fmt(r.v_x)},{_fmt(r.v_y)},"
                         f"{_fmt(r.polarization)},{_fmt(r.cfl)},"
                         f"{_fmt(r.residual_pressure)},{_fmt(r.residual_transport)}\n")
        return path
    except OSError as exc:
        raise IoError(str(exc)) from exc


SWEEP_COLUMNS = ("k_on", "dr", "dt", "n_r", "t_steady", "pol_steady", "mass_drift", "status", "reason")


def write_sweep_csv(records, path):
    """One row per sweep record, sorted canonically by (k_on, dr, dt).

    t_steady is left empty when no steady state was reached; wall time is
    deliberately not written so files stay reproducible bit for bit.
    """
    records = sorted(records, key=lambda r: (r.k_on, r.dr, r.dt))
    try:
        os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
        with open(path, "w") as fh:
            fh.write(",".join(SWEEP_COLUMNS) + "\n")
            for r in records:
                t_s = "" if r.t_steady is None else _fmt(r.t_steady)
                pol = "" if r.pol_steady is None else _fmt(r.pol_steady)
                drift = "" if r.mass_drift is None else _fmt(r.mass_drift)
                fh.write(f"{_fmt(r.k_on)},{_fmt(r.dr)},{_fmt(r.dt)},{r.n_r},"
                         f"{t_s},{pol},{drift},{r.status},{r.reason}\n")
        return path
    except OSError as exc:
        raise IoError(str(exc)) from exc


class OutputBundle:
    """Per-run output directory; meta.txt is always written first."""

    def __init__(self, config: Config):
        self.config = config
        self.outdir = config.outdir
        try:
            os.makedirs(self.outdir, exist_ok=True)
        except OSError as exc:
            raise IoError(str(exc)) from exc

    def write_meta(self):
        write_config_echo(self.config, os.path.join(self.outdir, "meta.txt"))

    def write_snapshot(self, state, grid, step):
        return write_snapshot(state, grid, step, self.outdir)

    def write_timeseries(self, diag):
        return write_timeseries(diag, self.outdir)
