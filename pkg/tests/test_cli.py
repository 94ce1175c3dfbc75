import subprocess
import sys

import pytest

from orthohaptic.cli import main
from orthohaptic.config import load_config


def run(argv, monkeypatch=None):
    out, err = [], []
    code = main(argv, out=out.append, err=err.append)
    return code, "\n".join(out), "\n".join(err)


@pytest.fixture(autouse=True)
def in_tmp(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv("ORTHOHAPTIC_OUTPUT_DIR", raising=False)


def test_ik_prints_nine_digits():
    code, out, _ = run(["ik", "--pose", "0.1,0,0,0,0,0"])
    assert code == 0
    assert "rho: 1.1 0.994987437 0.994987437" in out
    assert "gamma (deg): 0 0 0" in out


def test_fk_degrees_round_trip():
    code, out, _ = run(["fk", "--joints", "1.1,0.994987437,0.994987437,10,20,30"])
    assert code == 0
    assert "orientation (deg): 10 20 30" in out
    assert out.splitlines()[0].startswith("position: 0.1 ")


def test_jacobian_home():
    code, out, _ = run(["jacobian", "--joints", "1,1,1,0,0,0"])
    assert code == 0
    assert "condition numbers: translation 1, rotation 1" in out


def test_jacobian_needs_one_input():
    code, _, err = run(["jacobian"])
    assert code == 2 and "exactly one" in err


def test_kinematic_error_exit_code():
    code, _, err = run(["ik", "--pose", "0,0,0,60,0,0"])
    assert code == 3 and "OutOfRange" in err
    code, _, err = run(["fk", "--joints", "2.5,2.5,2.5,0,0,0"])
    assert code == 3 and "NoAssembly" in err


def test_usage_errors_name_the_token():
    code, _, err = run(["ik", "--pose", "0.1,zz,0,0,0,0"])
    assert code == 2 and "'zz'" in err
    code, _, err = run(["frobnicate"])
    assert code == 2 and "frobnicate" in err
    code, _, err = run(["fk", "--joints", "1,1"])
    assert code == 2 and "--joints" in err


def test_unknown_config_key(tmp_path):
    (tmp_path / "dev.cfg").write_text("legs = 4\n")
    code, _, err = run(["cube", "--config", "dev.cfg"])
    assert code == 2 and "legs" in err


def test_missing_config_is_io_error():
    code, _, err = run(["cube", "--config", "nope.cfg"])
    assert code == 3 and "nope.cfg" in err


def test_cube_prints_and_writes(tmp_path):
    (tmp_path / "dev.cfg").write_text("L = 1\n")
    code, out, _ = run(["cube", "--config", "dev.cfg", "--out", "cube.cfg"])
    assert code == 0
    assert "edge: 0.950337482" in out and "center:" in out
    text = (tmp_path / "cube.cfg").read_text()
    assert text.startswith("center_x = -0.0669")
    assert "edge = 0.9503374" in text


def test_workspace_map_single_point(tmp_path):
    code, _, _ = run(["workspace-map", "--n", "1", "--out", "m.csv"])
    assert code == 0
    lines = (tmp_path / "m.csv").read_text().splitlines()
    assert lines == ["x,y,z,sigma_min,sigma_max,kappa,member", "0,0,0,1,1,1,true"]


def test_workspace_map_deterministic(tmp_path):
    run(["workspace-map", "--n", "9", "--psi", "--out", "a.csv"])
    run(["workspace-map", "--n", "9", "--psi", "--out", "b.csv"])
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


def test_transmission_export(tmp_path):
    code, out, _ = run(["transmission", "--beta", "30", "--steps", "360", "--out", "t.csv"])
    assert code == 0
    lines = (tmp_path / "t.csv").read_text().splitlines()
    assert lines[0] == "theta_in_deg,theta_out_deg,speed_ratio"
    rows = [tuple(map(float, r.split(","))) for r in lines[1:]]
    assert len(rows) == 360
    k = max(range(360), key=lambda i: rows[i][2])
    assert rows[k][2] == pytest.approx(1.154701, abs=5e-7)
    # maximum where the input yoke lies in the bend plane
    assert rows[k][0] in (0.0, 180.0)
    assert rows[90][0] == 90 and rows[90][1] == pytest.approx(90, abs=1e-12)
    assert "max 1.15470054" in out


def test_transmission_bad_beta():
    code, _, err = run(["transmission", "--beta", "95"])
    assert code == 2 and "--beta" in err


def test_optimize_round_trip(tmp_path):
    code, out, _ = run(["optimize", "--edge", "0.5", "--psi", "2", "--out", "d.cfg"])
    assert code == 0 and "L: 0.79638" in out
    cfg = load_config(tmp_path / "d.cfg")
    assert cfg.L == pytest.approx(0.7964, abs=1e-3) and cfg.edge == 0.5
    code, _, _ = run(["optimize", "--config", "d.cfg", "--out", "d2.cfg"])
    assert code == 0
    assert (tmp_path / "d.cfg").read_text() == (tmp_path / "d2.cfg").read_text()


def test_optimize_infeasible():
    code, _, err = run(["optimize", "--psi", "1"])
    assert code == 4 and "infeasible" in err


def test_output_dir_override(tmp_path, monkeypatch):
    target = tmp_path / "outdir"
    target.mkdir()
    monkeypatch.setenv("ORTHOHAPTIC_OUTPUT_DIR", str(target))
    code, _, _ = run(["transmission", "--beta", "10", "--steps", "4", "--out", "t.csv"])
    assert code == 0 and (target / "t.csv").exists()
    assert not (tmp_path / "t.csv").exists()


def test_unwritable_output_leaves_nothing(tmp_path):
    code, _, err = run(["transmission", "--beta", "10", "--out", "missing/dir/t.csv"])
    assert code == 3 and "missing/dir/t.csv" in err
    assert list(tmp_path.iterdir()) == []


def test_config_file_untouched(tmp_path):
    p = tmp_path / "dev.cfg"
    p.write_text("L = 1 # keep this comment\n")
    run(["cube", "--config", "dev.cfg"])
    assert p.read_text() == "L = 1 # keep this comment\n"


def test_check_subset_deterministic():
    a = run(["check", "--only", "1", "2", "8", "transmission"])
    b = run(["check", "--only", "1", "2", "8", "transmission"])
    assert a == b and a[0] == 0
    assert a[1].count("PASS") == 4


def test_check_zero_tolerance_names_failure():
    code, out, _ = run(["check", "--only", "5", "8", "--tol-scale", "0"])
    assert code == 3
    assert "FAIL [5] jacobian-fd" in out and "FAIL [8] transmission" in out


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "orthohaptic", "ik", "--pose", "0,0,0,0,0,0"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and "rho: 1 1 1" in r.stdout


def test_full_check_passes():
    code, out, _ = run(["check"])
    assert code == 0, out
    assert out.splitlines()[-1] == "all suites passed"


def test_transmission_csv_parses_back_exactly(tmp_path):
    import math

    import numpy as np

    from orthohaptic.transmission import UJointConfig, ujoint_output, ujoint_speed_ratio

    run(["transmission", "--beta", "37.5", "--steps", "90", "--out", "t.csv"])
    rows = np.loadtxt(tmp_path / "t.csv", delimiter=",", skiprows=1)
    cfg = UJointConfig(math.radians(37.5))
    th = np.arange(90) * (2 * np.pi / 90)
    assert np.array_equal(rows[:, 1], np.degrees(ujoint_output(th, cfg)))
    assert np.array_equal(rows[:, 2], ujoint_speed_ratio(th, cfg))
