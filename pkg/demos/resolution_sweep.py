#!/usr/bin/env python3
"""Reduced (dr, dt) sweep at fixed activation rate, written to sweep.csv.

Render the result with the figgen package:

    figgen surface out_sweep/sweep.csv t_steady t_steady.png
    figgen surface out_sweep/sweep.csv polarization pol.png
"""

import os

from crawlfv import Config, run_sweep
from crawlfv.output import write_sweep_csv

base = Config(R_min=0.5, R=1.0, N_theta=160, k_on=0.3, t_max=200.0,
              eps_ss=1e-8, T_ss=1.0, outdir="out_sweep")
records = run_sweep(base, dr_list=[2e-2, 2.5e-2], dt_list=[5e-3, 1e-2, 1.5e-2],
                    kon_list=[0.3], workers=2)
path = write_sweep_csv(records, os.path.join(base.outdir, "sweep.csv"))
for r in records:
    print(f"dr={r.dr:g} dt={r.dt:g}: t_steady={r.t_steady}, pol={r.pol_steady:.6e} "
          f"({r.walltime:.1f}s)")
print("wrote", path)
