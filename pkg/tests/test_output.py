import math

import numpy as np
import pytest

from crawlfv import Config, SimState, build_grid, initial_state, parse_config
from crawlfv.driver import Diagnostics, DiagnosticsRow
from crawlfv.errors import BadValue, MissingFile, UnknownKey
from crawlfv.output import (read_field_snapshot, read_mu_snapshot, write_config_echo,
                            write_snapshot, write_sweep_csv, write_timeseries)
from crawlfv.sweep import SweepRecord


def test_parse_empty_config_gives_defaults(tmp_path):
    path = tmp_path / "empty.txt"
    path.write_text("")
    cfg = parse_config(str(path))
    assert cfg.R == 1.5 and cfg.R_min == 0.5
    assert cfg.k_off == 1.0 and cfg.D == 1.0 and cfg.k_d == 1.0
    assert cfg.delta == 2.0 and cfg.gamma == 2.0
    assert cfg.preset == "polarised"


def test_parse_single_override(tmp_path):
    path = tmp_path / "kon.txt"
    path.write_text("k_on = 3\n")
    cfg = parse_config(str(path))
    assert cfg.k_on == 3.0
    assert cfg.k_off == 1.0


def test_parse_unknown_key_reports_line(tmp_path):
    path = tmp_path / "typo.txt"
    path.write_text("k_onn = 3\n")
    with pytest.raises(UnknownKey, match="line 1"):
        parse_config(str(path))


def test_parse_bad_value_reports_line(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("# comment\nk_on = banana\n")
    with pytest.raises(BadValue, match="line 2"):
        parse_config(str(path))


def test_parse_missing_file():
    with pytest.raises(MissingFile):
        parse_config("/nonexistent/config.txt")


def test_config_echo_roundtrip(tmp_path):
    cfg = Config(k_on=3.0, N_r=7, dr_list=(1e-2, 2e-2), eps_ss=3.5e-7,
                 preset="uniform", write_timeseries=False, outdir="somewhere")
    path = tmp_path / "meta.txt"
    write_config_echo(cfg, str(path))
    assert parse_config(str(path)) == cfg


def test_outdir_env_override(tmp_path, monkeypatch):
    path = tmp_path / "c.txt"
    path.write_text("outdir = from_file\n")
    monkeypatch.setenv("CRAWLFV_OUTDIR", "from_env")
    assert parse_config(str(path)).outdir == "from_env"
    monkeypatch.delenv("CRAWLFV_OUTDIR")
    assert parse_config(str(path)).outdir == "from_file"


def test_snapshot_roundtrip_bit_exact(tmp_path):
    rng = np.random.default_rng(1)
    g = build_grid(0.5, 1.5, 4, 8)
    state = SimState(0.0, rng.normal(size=(4, 8)) * 1e-7, rng.normal(size=8))
    field_path, mu_path = write_snapshot(state, g, 3, str(tmp_path))
    assert field_path.endswith("field_000003.csv")
    assert np.array_equal(read_field_snapshot(field_path, g), state.c_tilde)
    assert np.array_equal(read_mu_snapshot(mu_path, g), state.mu_tilde)


def test_snapshot_scaling_column(tmp_path):
    g = build_grid(0.5, 1.5, 4, 8)
    state = SimState(0.0, np.tile(g.r_centers[:, None], (1, 8)), np.zeros(8))
    field_path, _ = write_snapshot(state, g, 0, str(tmp_path))
    data = np.genfromtxt(field_path, delimiter=",", names=True)
    assert np.allclose(data["c"], 1.0, rtol=1e-15)


def test_snapshot_zero_state_c_column(tmp_path):
    g = build_grid(0.5, 1.5, 4, 8)
    field_path, _ = write_snapshot(SimState(0.0, np.zeros((4, 8)), np.zeros(8)), g, 0, str(tmp_path))
    data = np.genfromtxt(field_path, delimiter=",", names=True)
    assert np.all(data["c"] == 0.0)


def test_timeseries_empty_and_single_row(tmp_path):
    path = write_timeseries(Diagnostics(), str(tmp_path))
    lines = open(path).read().splitlines()
    assert len(lines) == 1
    assert lines[0] == "step,t,mass,v_x,v_y,polarization,cfl,residual_pressure,residual_transport"

    diag = Diagnostics()
    diag.append(DiagnosticsRow(0, 0.0, 1.0, 3.0, 4.0, 5.0, 0.1, 1e-14, 1e-13))
    path = write_timeseries(diag, str(tmp_path))
    lines = open(path).read().splitlines()
    assert len(lines) == 2


def test_timeseries_polarization_consistent(tmp_path):
    diag = Diagnostics()
    rng = np.random.default_rng(2)
    for n in range(5):
        vx, vy = rng.normal(size=2)
        diag.append(DiagnosticsRow(n, n * 0.1, 1.0, vx, vy, math.hypot(vx, vy), 0.0, 0.0, 0.0))
    path = write_timeseries(diag, str(tmp_path))
    data = np.genfromtxt(path, delimiter=",", names=True)
    assert np.allclose(data["polarization"], np.hypot(data["v_x"], data["v_y"]), rtol=1e-15)


def test_sweep_csv_sorted_with_gaps(tmp_path):
    records = [
        SweepRecord(0.3, 2e-2, 1e-2, 25, 12.5, 3.2, 1e-12, 1.0),
        SweepRecord(0.3, 1e-2, 1e-2, 50, None, 2.0, 1e-12, 1.0),
        SweepRecord(0.1, 2e-2, 5e-3, 25, 8.0, 0.1, 1e-12, 1.0),
    ]
    path = write_sweep_csv(records, str(tmp_path / "sweep.csv"))
    lines = open(path).read().splitlines()
    assert lines[0] == "k_on,dr,dt,n_r,t_steady,pol_steady,mass_drift,status,reason"
    assert len(lines) == 4
    # sorted by (k_on, dr, dt): the k_on=0.1 row first, then dr=1e-2 before 2e-2
    assert lines[1].startswith("1.0") and ",0.1," not in lines[1]
    first = lines[1].split(",")
    assert float(first[0]) == 0.1
    second = lines[2].split(",")
    assert float(second[0]) == 0.3 and float(second[1]) == 1e-2
    assert second[4] == ""  # missing steady time stays blank


def test_outputs_reproducible_from_config(tmp_path):
    cfg = Config(N_r=4, N_theta=8, t_max=0.05, dt=1e-2, outdir=str(tmp_path / "o1"))
    from crawlfv import run_simulation

    run_simulation(cfg)
    cfg2 = Config(N_r=4, N_theta=8, t_max=0.05, dt=1e-2, outdir=str(tmp_path / "o2"))
    run_simulation(cfg2)
    a = (tmp_path / "o1" / "timeseries.csv").read_bytes()
    b = (tmp_path / "o2" / "timeseries.csv").read_bytes()
    assert a == b
