"""Polar heatmaps of field snapshots and (dr, dt) grid plots of sweeps."""

import csv
import os

import matplotlib

matplotlib.use("Agg")  # batch rendering only

import matplotlib.pyplot as plt
import numpy as np


class FiggenError(Exception):
    pass


class MissingFile(FiggenError):
    pass


class BadColumns(FiggenError):
    pass


class MixedKon(FiggenError):
    pass


FIELD_COLUMNS = ("j", "k", "r", "theta", "c_tilde", "c")
SWEEP_QUANTITIES = {"t_steady": "t_steady", "polarization": "pol_steady"}


def _read_rows(path):
    if not os.path.isfile(path):
        raise MissingFile(f"no such file: {path}")
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise BadColumns(f"{path} is empty") from None
        rows = [row for row in reader if row]
    return tuple(h.strip() for h in header), rows


def load_field(path):
    """Pivot a field snapshot into (r_centers, theta_centers, c) grids."""
    header, rows = _read_rows(path)
    if header != FIELD_COLUMNS:
        raise BadColumns(f"{path}: expected columns {FIELD_COLUMNS}, found {header}")
    try:
        j = np.array([int(row[0]) for row in rows])
        k = np.array([int(row[1]) for row in rows])
        r = np.array([float(row[2]) for row in rows])
        theta = np.array([float(row[3]) for row in rows])
        c = np.array([float(row[5]) for row in rows])
    except (ValueError, IndexError) as exc:
        raise BadColumns(f"{path}: malformed row ({exc})") from exc
    n_r, n_t = j.max(), k.max()
    if len(rows) != n_r * n_t or j.min() != 1 or k.min() != 1:
        raise BadColumns(f"{path}: expected a full {n_r}x{n_t} grid of rows")
    r_centers = np.zeros(n_r)
    theta_centers = np.zeros(n_t)
    grid = np.zeros((n_r, n_t))
    r_centers[j - 1] = r
    theta_centers[k - 1] = theta
    grid[j - 1, k - 1] = c
    return r_centers, theta_centers, grid


def _edges(centers, wrap=None):
    d = np.diff(centers).mean() if len(centers) > 1 else (wrap or 1.0)
    return np.concatenate([[centers[0] - d / 2], centers + d / 2])


def render_field_heatmap(field_csv, out_image):
    """Annulus heatmap of the concentration c from a field snapshot."""
    r_centers, theta_centers, c = load_field(field_csv)
    theta_edges = _edges(theta_centers)
    r_edges = _edges(r_centers)
    fig, ax = plt.subplots(subplot_kw={"projection": "polar"}, figsize=(6, 5))
    mesh = ax.pcolormesh(theta_edges, r_edges, c, shading="flat", cmap="viridis")
    ax.set_rorigin(0.0)
    ax.set_rlim(0.0, r_edges[-1])
    ax.set_title("molecular concentration")
    fig.colorbar(mesh, ax=ax, label="c")
    fig.savefig(out_image, dpi=150)
    plt.close(fig)
    return out_image


def load_sweep(path, quantity):
    if quantity not in SWEEP_QUANTITIES:
        raise ValueError(f"quantity must be one of {sorted(SWEEP_QUANTITIES)}, got {quantity!r}")
    header, rows = _read_rows(path)
    needed = ("k_on", "dr", "dt", SWEEP_QUANTITIES[quantity])
    missing = [c for c in needed if c not in header]
    if missing:
        raise BadColumns(f"{path}: missing columns {missing}")
    idx = {name: header.index(name) for name in needed}

    def parse(row, name):
        cell = row[idx[name]].strip()
        return float(cell) if cell else np.nan

    kon = {row[idx["k_on"]].strip() for row in rows}
    if len(kon) > 1:
        raise MixedKon(f"{path}: one k_on per plot, found {sorted(kon)}")
    drs = sorted({parse(row, "dr") for row in rows})
    dts = sorted({parse(row, "dt") for row in rows})
    grid = np.full((len(drs), len(dts)), np.nan)
    for row in rows:
        i = drs.index(parse(row, "dr"))
        jj = dts.index(parse(row, "dt"))
        grid[i, jj] = parse(row, SWEEP_QUANTITIES[quantity])
    return np.array(drs), np.array(dts), grid


def render_sweep_surface(sweep_csv, quantity, out_image):
    """Grid plot of t_steady or polarization over (dr, dt); empty cells
    (runs without a steady state) render as gaps."""
    drs, dts, grid = load_sweep(sweep_csv, quantity)
    fig, ax = plt.subplots(figsize=(6, 4.5))
    masked = np.ma.masked_invalid(grid)
    mesh = ax.pcolormesh(_edges(dts), _edges(drs), masked, shading="flat", cmap="plasma")
    ax.set_xlabel("dt")
    ax.set_ylabel("dr")
    ax.set_xticks(dts)
    ax.set_yticks(drs)
    ax.set_title(quantity)
    fig.colorbar(mesh, ax=ax, label=quantity)
    fig.savefig(out_image, dpi=150)
    plt.close(fig)
    return out_image
