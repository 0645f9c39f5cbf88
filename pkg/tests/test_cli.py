import csv
import json
import math

from abheat import cli


def _run(args, capsys):
    code = cli.main(args)
    return code, capsys.readouterr()


def test_density_psi1_header_ring_and_sidecar(tmp_path):
    out = tmp_path / "d.csv"
    assert cli.main(["density", "--mode", "psi1", "--alpha", "0.4", "--grid", "61,61,4",
                     "-o", str(out)]) == 0
    with open(out) as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["xi1", "xi2", "density"]
    assert len(rows) == 1 + 61 * 61
    meta = json.loads((tmp_path / "d.csv.meta.json").read_text())
    assert meta["config"]["mode"] == "psi1"
    cell = 8.0 / 60
    assert abs(meta["argmax_radius"] - math.sqrt(0.8)) <= cell * math.sqrt(2)
    assert abs(meta["norm_trapezoid"] - 1.0) < 1e-3


def test_density_psi2_vanishes_at_b(tmp_path):
    out = tmp_path / "d2.csv"
    assert cli.main(["density", "--mode", "psi2", "--grid", "21,21,5", "-o", str(out)]) == 0
    meta = json.loads((tmp_path / "d2.csv.meta.json").read_text())
    assert meta["density_at_b"] < 1e-8
    assert "flagged_samples_ij" in meta


def test_density_is_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for p in (a, b):
        assert cli.main(["density", "--mode", "psi2", "--grid", "17,17,5", "-o", str(p)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_density_rejects_small_grid(tmp_path, capsys):
    code, cap = _run(["density", "--grid", "10,10,5", "-o", str(tmp_path / "x.csv")], capsys)
    assert code == 2
    assert "error" in cap.err


def test_config_file_and_flag_precedence(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# shift run\nalpha = 0.3\nbeta = 0.8\nD = 30\n")
    code, cap = _run(["shift", "--config", str(cfg), "--D", "25", "--no-boundary",
                      "-o", "-"], capsys)
    assert code == 0
    res = json.loads(cap.out)
    assert res["config"]["alpha"] == 0.3
    assert res["config"]["beta"] == 0.8
    assert res["config"]["D"] == 25.0


def test_config_file_unknown_key(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour = blue\n")
    code, _ = _run(["shift", "--config", str(cfg), "-o", "-"], capsys)
    assert code == 2


def test_kernel_one_forms_agree(capsys):
    code, cap = _run(["kernel", "one", "-o", "-"], capsys)
    assert code == 0
    res = json.loads(cap.out)
    i, e = res["integral"], res["expansion"]
    assert abs(complex(i["re"], i["im"]) - complex(e["re"], e["im"])) < 1e-10


def test_kernel_two_terms(capsys):
    code, cap = _run(["kernel", "two", "--nmax", "2", "-o", "-"], capsys)
    assert code == 0
    res = json.loads(cap.out)
    assert res["tail"] >= 0
    assert len(res["length_totals"]) == 3


def test_kernel_two_rejects_equal_fluxes(capsys):
    code, cap = _run(["kernel", "two", "--alpha", "0.5", "--beta", "0.5", "-o", "-"], capsys)
    assert code == 2


def test_shift_table(capsys):
    code, cap = _run(["shift", "--table", "20,40", "-o", "-"], capsys)
    assert code == 0
    rows = json.loads(cap.out)["rows"]
    assert rows[0]["relative_gap"] <= 10 / 20
    assert rows[1]["relative_gap"] < 0.65 * rows[0]["relative_gap"]


def test_shift_csv(capsys):
    code, cap = _run(["shift", "--table", "20,30", "--format", "csv", "-o", "-"], capsys)
    assert code == 0
    lines = [ln for ln in cap.out.splitlines() if not ln.startswith("#")]
    assert lines[0].startswith("D,")
    assert len(lines) == 3


def test_verify_all(capsys):
    code, cap = _run(["verify", "all", "-o", "-"], capsys)
    assert code == 0
    rows = [ln for ln in cap.out.splitlines() if not ln.startswith("#")]
    assert rows[0] == "suite,check,value,tol,lower_bound,passed"
    assert all(ln.endswith(",True") for ln in rows[1:])


def test_verify_json(capsys):
    code, cap = _run(["verify", "specfun", "--format", "json", "-o", "-"], capsys)
    assert code == 0
    res = json.loads(cap.out)
    assert res["failures"] == 0
    assert all(c["passed"] is True for c in res["checks"])
