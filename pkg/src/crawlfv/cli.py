"""Command-line interface: run, sweep, poisson-check, mass-check.

Exit codes: 0 success, 2 configuration/validation error, 3 solver failure.
"""

import argparse
import os
import sys

from . import output
from .errors import CrawlFVError, NonFiniteState, SingularMatrix, SolverDiverged
from .driver import run_simulation
from .studies import mass_check, poisson_convergence
from .sweep import run_sweep

_SOLVER_ERRORS = (SolverDiverged, SingularMatrix, NonFiniteState)


def _cmd_run(args):
    config = output.parse_config(args.config)
    result = run_simulation(config)
    steady = result.steady
    t_s = "none" if steady.t_steady is None else f"{steady.t_steady:.6g}"
    print(f"finished at t = {result.state.t:.6g} after {result.diagnostics.rows[-1].step} steps")
    print(f"t_steady = {t_s}")
    print(f"polarization = {steady.polarization:.6e}")
    print(f"max mass drift = {steady.max_mass_drift:.3e}")
    print(f"outputs in {config.outdir}")
    return 0


def _cmd_sweep(args):
    config = output.parse_config(args.config)
    if not (config.dr_list and config.dt_list and config.kon_list):
        print("warning: empty dr_list/dt_list/kon_list gives an empty sweep", file=sys.stderr)
    records = run_sweep(config, config.dr_list, config.dt_list, config.kon_list,
                        workers=config.workers)
    path = output.write_sweep_csv(records, os.path.join(config.outdir, "sweep.csv"))
    for r in records:
        t_s = "none" if r.t_steady is None else f"{r.t_steady:.6g}"
        pol = "none" if r.pol_steady is None else f"{r.pol_steady:.6e}"
        print(f"k_on={r.k_on:g} dr={r.dr:g} dt={r.dt:g}: status={r.status} "
              f"t_steady={t_s} pol={pol} wall={r.walltime:.1f}s")
    print(f"wrote {path} ({len(records)} records)")
    return 0


def _cmd_poisson_check(args):
    config = output.parse_config(args.config)
    for mode in ("paper", "face"):
        res = poisson_convergence(R_min=config.R_min, R=config.R, k_d=config.k_d,
                                  mode=mode, tol=config.tol)
        pairs = " ".join(f"N_r={n}: {e:.3e}" for n, e in zip(res.n_r_values, res.errors))
        print(f"mode {mode}: {pairs}")
        print(f"mode {mode}: observed order = {res.observed_order:.2f}")
    return 0


def _cmd_mass_check(args):
    config = output.parse_config(args.config)
    n_steps = args.steps
    drift = mass_check(config, n_steps)
    print(f"max relative mass drift over {n_steps} steps: {drift:.3e}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="crawlfv",
                                     description="Finite-volume crawling-cell migration solver")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one simulation")
    p_run.add_argument("config")
    p_run.set_defaults(func=_cmd_run)

    p_sweep = sub.add_parser("sweep", help="run the (dr, dt, k_on) sweep from the config lists")
    p_sweep.add_argument("config")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_poi = sub.add_parser("poisson-check", help="convergence study against the analytic radial profile")
    p_poi.add_argument("config")
    p_poi.set_defaults(func=_cmd_poisson_check)

    p_mass = sub.add_parser("mass-check", help="report the mass drift over a fixed number of steps")
    p_mass.add_argument("config")
    p_mass.add_argument("--steps", type=int, default=1000)
    p_mass.set_defaults(func=_cmd_mass_check)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _SOLVER_ERRORS as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return 3
    except (CrawlFVError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
