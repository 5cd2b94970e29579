#!/usr/bin/env python3
"""Convergence of the pressure solver against the analytic radial profile.

The outer circle carries a uniform Dirichlet value and the bulk a constant
sink, so the exact solution is k_d r^2/4 + a ln r + b.  The ghost-value
closure ("paper") is first order at the boundary; imposing the data at the
physical faces ("face") recovers second order.
"""

from crawlfv.studies import poisson_convergence

for mode in ("paper", "face"):
    res = poisson_convergence(R_min=0.5, R=1.5, k_d=1.0, mode=mode,
                              n_r_values=(10, 20, 40, 80, 160))
    print(f"mode {mode}:")
    for n_r, err in zip(res.n_r_values, res.errors):
        print(f"  N_r = {n_r:4d}   Linf error = {err:.4e}")
    print("  pairwise orders:", ", ".join(f"{o:.3f}" for o in res.orders))
