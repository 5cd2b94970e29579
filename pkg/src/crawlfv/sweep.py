"""Parameter sweeps over (dr, dt, k_on): time to steady state and
stationary polarization, one record per combination."""

import dataclasses
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

from .driver import Config, run_simulation
from .errors import CrawlFVError


@dataclass
class SweepRecord:
    k_on: float
    dr: float
    dt: float
    n_r: int
    t_steady: Optional[float]
    pol_steady: Optional[float]
    mass_drift: Optional[float]
    walltime: float
    status: str = "ok"
    reason: str = ""


def _radial_cells(base: Config, dr):
    """Number of rings for a requested dr, or None if it does not divide."""
    n = (base.R - base.R_min) / dr
    n_round = round(n)
    if n_round < 2 or abs(n - n_round) > 1e-9 * max(1.0, n):
        return None
    return int(n_round)


def _run_one(base: Config, k_on, dr, dt, write_outputs):
    n_r = _radial_cells(base, dr)
    if n_r is None:
        return SweepRecord(k_on, dr, dt, 0, None, None, None, 0.0,
                           status="skipped", reason=f"dr={dr} does not divide R-R_min")
    sub = dataclasses.replace(
        base, N_r=n_r, dt=dt, k_on=k_on,
        outdir=os.path.join(base.outdir, f"rec_kon{k_on:g}_dr{dr:g}_dt{dt:g}"),
        snapshot_every=0, write_timeseries=False,
    )
    start = time.perf_counter()
    try:
        result = run_simulation(sub, write_outputs=write_outputs)
    except CrawlFVError as exc:
        return SweepRecord(k_on, dr, dt, n_r, None, None, None,
                           time.perf_counter() - start,
                           status="failed", reason=f"{type(exc).__name__}: {exc}")
    elapsed = time.perf_counter() - start
    return SweepRecord(k_on, dr, dt, n_r,
                       result.steady.t_steady, result.steady.polarization,
                       result.steady.max_mass_drift, elapsed)


def run_sweep(base: Config, dr_list, dt_list, kon_list, workers=1, write_outputs=True):
    """Cartesian product of the three lists; failures and non-dividing dr
    values become recorded rows, never aborted sweeps.  Records come back
    sorted by (k_on, dr, dt) regardless of execution order."""
    combos = [(k, dr, dt) for k in kon_list for dr in dr_list for dt in dt_list]
    if workers and workers > 1 and len(combos) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(lambda c: _run_one(base, *c, write_outputs), combos))
    else:
        records = [_run_one(base, *c, write_outputs) for c in combos]
    records.sort(key=lambda r: (r.k_on, r.dr, r.dt))
    return records
