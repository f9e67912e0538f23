import csv
import json

import numpy as np
import pytest

from susy_lab import cli, susy_core
from susy_lab.susy_core import PotentialPair

METADATA_KEYS = {"kernel", "g", "s", "L", "points", "h", "tolerances", "version"}


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_dual_pair_constant(tmp_path, capsys):
    code, out, _ = run(capsys, "dual-pair", "--kernel", "constant", "--omega", 2, "--s", -0.25,
                       "--points", 2001, "--out", tmp_path)
    assert code == 0
    meta = json.loads((tmp_path / "pair_meta.json").read_text())
    assert meta["duality_residual"] <= meta["duality_bound"]
    assert METADATA_KEYS <= set(meta)
    with (tmp_path / "pair_s_pos.csv").open() as fh:
        pos = list(csv.reader(fh))
    with (tmp_path / "pair_s_neg.csv").open() as fh:
        neg = list(csv.reader(fh))
    assert pos[0] == ["x", "V_minus", "V_plus", "W"]
    p, n = np.array(pos[1:], float), np.array(neg[1:], float)
    # duality across the two files: V_minus(-s) = V_plus(s)
    assert np.array_equal(p[:, 1], n[:, 2]) and np.array_equal(p[:, 3], -n[:, 3])
    assert all(len(v.split("e")[0].replace("-", "").replace(".", "")) == 17 for v in pos[1][1:])


def test_dual_pair_records_s_from_g(tmp_path, capsys):
    code, _, _ = run(capsys, "dual-pair", "--kernel", "harmonic", "--omega", 1, "--g", 2,
                     "--points", 1001, "--out", tmp_path)
    assert code == 0
    meta = json.loads((tmp_path / "pair_meta.json").read_text())
    assert meta["s"] == pytest.approx(-0.6, abs=1e-15) and meta["g"] == 2.0


@pytest.mark.parametrize("argv", [
    ["dual-pair", "--kernel", "constant", "--omega", "1", "--g", "1"],
    ["dual-pair", "--kernel", "constant"],
    ["dual-pair", "--kernel", "poly", "--s", "0.3"],
    ["dual-pair", "--kernel", "neg-constant", "--s", "0.5", "--L", "4"],
])
def test_dual_pair_domain_errors(tmp_path, capsys, argv):
    code, _, err = run(capsys, *argv, "--out", tmp_path)
    assert code == 2 and "error" in err


def test_dual_pair_io_error(tmp_path, capsys):
    blocker = tmp_path / "file"
    blocker.write_text("")
    code, _, _ = run(capsys, "dual-pair", "--s", 0.3, "--points", 101, "--out", blocker)
    assert code == 3


def test_singular_profile_exit_code(tmp_path, capsys):
    code, _, err = run(capsys, "dual-pair", "--kernel", "poly", "--coeffs", "-1", "--s", 1 - 1e-9,
                       "--L", 3, "--points", 301, "--out", tmp_path)
    assert code == 2 and "vanishes" in err


def test_spectrum_ex1(capsys):
    code, out, _ = run(capsys, "spectrum", "--kernel", "constant", "--omega", 2, "--s", -0.25)
    assert code == 0
    data = json.loads(out)
    ev = data["minus"]["eigenvalues"]
    assert np.allclose(ev[:4], [0, 1.75, 3.0, 3.75], atol=5e-3)
    assert data["minus"]["threshold_flags"] == [False] * 4 + [True]
    assert data["status"] == "unbroken-minus" and data["pairing"]["status"] == "unbroken-minus"
    assert set(data["pairing"]) >= {"pairs", "unpaired", "status"}
    assert set(data["minus"]) == {"sector", "eigenvalues", "node_counts", "threshold_flags", "v_infinity"}
    assert METADATA_KEYS <= set(data["metadata"])


def test_spectrum_ex2(capsys):
    code, out, _ = run(capsys, "spectrum", "--kernel", "harmonic", "--omega", 1, "--s", -1 / 3)
    data = json.loads(out)
    assert code == 0 and data["status"] == "unbroken-minus"
    assert abs(data["minus"]["eigenvalues"][0]) <= 5e-3
    assert data["minus"]["v_infinity"] is None


def test_spectrum_calibration_csv(tmp_path, capsys):
    path = tmp_path / "osc.csv"
    code, _, _ = run(capsys, "spectrum", "--kernel", "sip-oscillator", "--omega", 1, "--format", "csv", "--out", path)
    assert code == 0
    rows = list(csv.DictReader(path.open()))
    minus = [float(r["energy"]) for r in rows if r["sector"] == "minus"]
    assert np.allclose(minus, [0, 2, 4, 6, 8], atol=5e-4)


def test_spectrum_table_kernel(tmp_path, capsys):
    x = np.linspace(-30, 30, 6001)
    path = tmp_path / "k.csv"
    path.write_text("x,k\n" + "".join(f"{float(a)!r},4.0\n" for a in x))
    code, out, _ = run(capsys, "spectrum", "--kernel", "table", "--table", path, "--s", -0.25, "--L", 24)
    data = json.loads(out)
    assert code == 0
    assert np.allclose(data["minus"]["eigenvalues"][:4], [0, 1.75, 3.0, 3.75], atol=5e-3)


def test_verify_single_check(capsys):
    code, out, _ = run(capsys, "verify", "--check", "riccati", "--kernel", "harmonic")
    assert code == 0
    lines = [ln for ln in out.splitlines() if "riccati" in ln]
    assert lines and all("harmonic" in ln for ln in lines)


def test_verify_unknown_check(capsys):
    code, _, err = run(capsys, "verify", "--check", "nope")
    assert code == 2 and "valid" in err


def test_verify_all_passes(capsys):
    code, out, _ = run(capsys, "verify", "--all")
    assert code == 0, out
    assert "FAIL" not in out


def test_verify_detects_sign_error(monkeypatch, capsys):
    real = susy_core.partner_pair

    def broken(profile, kernel, s, grid=None):
        pair = real(profile, kernel, s, grid)
        k = kernel(pair.grid.x)
        # +s k -> -s k in V_minus
        return PotentialPair(s=pair.s, V_minus=pair.V_minus - 2 * s * k, V_plus=pair.V_plus, W=pair.W,
                             grid=pair.grid, kernel=kernel)

    monkeypatch.setattr(susy_core, "partner_pair", broken)
    code, out, _ = run(capsys, "verify", "--check", "duality")
    assert code == 1 and "FAIL" in out


def test_figure_outputs_and_determinism(tmp_path, capsys):
    code, _, _ = run(capsys, "figure", "A1", "--out", tmp_path / "a")
    assert code == 0
    run(capsys, "figure", "A1", "--out", tmp_path / "b")
    for name in ("figure_A1.csv", "figure_A1.svg", "figure_A1_levels.json"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    levels = json.loads((tmp_path / "a" / "figure_A1_levels.json").read_text())
    assert len(levels["overlay"]) == 5
    svg = (tmp_path / "a" / "figure_A1.svg").read_text()
    assert 'viewBox="0 0 800 600"' in svg and svg.count("<polyline") == 2 and svg.count("<line") == 5


def test_figure_a2(tmp_path, capsys):
    code, _, _ = run(capsys, "figure", "A2", "--out", tmp_path)
    assert code == 0
    levels = json.loads((tmp_path / "figure_A2_levels.json").read_text())
    assert len(levels["overlay"]) == 1 and abs(levels["overlay"][0]["energy"]) <= 5e-3
    rows = np.array(list(csv.reader((tmp_path / "figure_A2.csv").open()))[1:], float)
    vm = rows[:, 1]
    mid = np.argmin(np.abs(rows[:, 0]))
    assert vm[mid] == 0.0 and vm.min() < 0


def test_figure_unknown_name(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["figure", "A3"])
    assert exc.value.code == 2
    assert "A1" in capsys.readouterr().err


def test_sweep_counts(capsys):
    code, out, _ = run(capsys, "sweep", "--kernel", "constant", "--s-values=-0.2,-0.25,-0.5,0.25",
                       "--points", 4001)
    data = json.loads(out)
    assert code == 0
    rows = data["rows"]
    assert [r["s"] for r in rows] == [-0.5, -0.25, -0.2, 0.25]
    assert [r["bound_state_count"] for r in rows[:3]] == [3, 5, 6]
    assert rows[3]["status"] == "unbroken-plus"
    assert all(r["duality_residual"] <= r["duality_bound"] for r in rows)


def test_sweep_range_and_empty(capsys):
    code, out, _ = run(capsys, "sweep", "--s-range", -0.5, -0.3, 3, "--points", 2001)
    assert code == 0 and len(json.loads(out)["rows"]) == 3
    code, _, _ = run(capsys, "sweep", "--s-values", "")
    assert code == 2
    code, _, _ = run(capsys, "sweep", "--s-values=0.0")
    assert code == 2


def test_spectrum_json_is_deterministic(capsys):
    a = run(capsys, "spectrum", "--kernel", "constant", "--s", -0.5, "--points", 2001)[1]
    b = run(capsys, "spectrum", "--kernel", "constant", "--s", -0.5, "--points", 2001)[1]
    assert a == b
