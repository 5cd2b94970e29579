#!/usr/bin/env python3
"""Steady states of the coupled system at two membrane activation rates.

Writes field/boundary snapshots under out_regimes/<k_on>/ so the figgen
package can render the annulus heatmaps:

    figgen heatmap out_regimes/kon_3/field_<last>.csv kon3.png
"""

from crawlfv import Config, run_simulation

for k_on in (0.3, 3.0):
    config = Config(R_min=0.5, R=1.5, N_r=19, N_theta=120, k_on=k_on, dt=1e-2,
                    t_max=150.0, eps_ss=1e-7, T_ss=1.0,
                    outdir=f"out_regimes/kon_{k_on:g}", snapshot_every=2000)
    result = run_simulation(config)
    s = result.steady
    print(f"k_on = {k_on:g}: t_steady = {s.t_steady}, polarization = {s.polarization:.4e}, "
          f"mass drift = {s.max_mass_drift:.2e}")
    print(f"  snapshots in {config.outdir}")
