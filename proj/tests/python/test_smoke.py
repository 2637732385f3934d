import json
import math
import os
import subprocess

import pytest

import heismag


def test_exports():
    assert len(heismag.FAMILIES) == 6
    assert issubclass(heismag.UnknownFamily, heismag.HeismagError)


def test_circular_family_values():
    x, y, z, xp, yp, zp = heismag.eval_family("g2-v4-circular", math.pi / 4, c=2.0)
    assert abs(x) < 1e-15
    assert abs(y + 2.0) < 1e-15
    # z' + x y' vanishes along this curve
    assert abs(zp + x * yp) < 1e-13


def test_check_family_verdicts():
    ok = heismag.check_family("g2-v4-circular", tol=1e-9)
    assert ok["pass"] and ok["max_ode_residual"] <= 1e-12
    bad = heismag.check_family("g1-v1-linear", variant="as-printed", k=[1, 0, 1, 0, 0], tol=1e-6)
    assert not bad["pass"]
    with pytest.raises(heismag.UnknownFamily):
        heismag.check_family("nosuch")


def test_integrate_matches_closed_form():
    run = heismag.integrate("g2", "V4", 1.0, [2, 0, 0, 0, -4, 8], t_end=2 * math.pi, samples=201)
    assert run["speed_drift"] <= 1e-7
    for t, s in zip(run["t"], run["states"]):
        ref = heismag.eval_family("g2-v4-circular", t, c=2.0)
        assert max(abs(a - b) for a, b in zip(s[:3], ref[:3])) <= 1e-6


def test_jacobi_and_k():
    assert heismag.complete_K(0.0) == pytest.approx(math.pi / 2, abs=1e-15)
    sn, cn, dn = heismag.jacobi(0.7, 0.4)
    assert sn * sn + cn * cn == pytest.approx(1.0, abs=1e-14)
    assert dn * dn + 0.4 * sn * sn == pytest.approx(1.0, abs=1e-14)
    with pytest.raises(heismag.DomainError):
        heismag.complete_K(1.0)


def test_solve_reduced_stays_in_band():
    rows = heismag.solve_reduced("g2-v3", 1.0, 0.5, 0.0, [0.1 * i for i in range(50)])
    for _, y, _ in rows:
        assert 0.5 - 1e-12 <= y <= math.sqrt(0.75) + 1e-12
    with pytest.raises(heismag.UnboundedOrbit):
        heismag.solve_reduced("g1-v2", 1.0, 0.0, 1.0, [0.0, 10.0])


def test_run_cli_in_process():
    code, out, _ = heismag.run_cli(["killing-check", "--metric", "g2", "--lambda", "2", "--samples", "10"])
    assert code == 0
    assert json.loads(out)["pass"] is True


@pytest.mark.skipif("HEISMAG_BIN" not in os.environ, reason="binary path not provided")
def test_binary_exit_codes(tmp_path):
    exe = os.environ["HEISMAG_BIN"]

    def code(*args):
        return subprocess.run([exe, *args], capture_output=True, cwd=tmp_path).returncode

    assert code("verify", "--family", "g2-v4-circular", "--variant", "derivation", "--tol", "1e-9") == 0
    assert code("verify", "--family", "g1-v1-linear", "--variant", "as-printed", "--k", "1,0,1,0,0",
                "--tol", "1e-6") == 1
    assert code("integrate", "--metric", "g2", "--killing", "V4", "--init", "2,0,0,0,-4,8") == 2
    assert code("verify", "--family", "nosuch") == 4
    assert code("integrate", "--metric", "g2", "--killing", "V4", "--lambda", "1", "--init",
                "2,0,0,0,-4,8", "--t-end", "1") == 0
    assert (tmp_path / "trajectory.csv").read_text().startswith("t,x,y,z,xp,yp,zp,speed,first_integral\n")
