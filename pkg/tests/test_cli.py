import csv
import io
import json
import math
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from wavekk import cli
from wavekk.output import csv_text, fmt_float, json_text

GOLDEN = Path(__file__).parent / "golden"


def params_file(tmp_path, name="params", **kw):
    f = tmp_path / f"{name}.json"
    f.write_text(json.dumps(kw))
    return str(f)


@pytest.fixture
def e_params(tmp_path, electron):
    return params_file(tmp_path, "electron", **electron.params.to_dict())


@pytest.fixture
def m_params(tmp_path, molecule):
    return params_file(tmp_path, "molecule", **molecule.params.to_dict())


@pytest.mark.parametrize("name", sorted(cli.PRESETS))
def test_golden_scales(name):
    golden = (GOLDEN / name / "scales.json").read_bytes()
    assert cli.scales_json(cli.PRESETS[name]).encode() == golden


def test_golden_values():
    e = json.loads((GOLDEN / "electron" / "scales.json").read_text())
    assert (e["t_r"], e["t_d"], e["analytic"]) == (2.5, 8, True)
    m = json.loads((GOLDEN / "molecule" / "scales.json").read_text())
    assert (m["t_d"], m["lower_half_count"], m["analytic"]) == (6480, 12, False)


def test_float_format():
    assert fmt_float(2.5) == "2.5"
    assert fmt_float(0.1) == "0.10000000000000001"
    assert fmt_float(-0.0) == "0"
    assert fmt_float(math.nan) == "nan"
    assert float(fmt_float(math.pi)) == math.pi
    text = csv_text(["a", "b"], [(1.0, True), (np.float64(1e-300), "x")])
    assert text == "a,b\n1,true\n1e-300,x\n"
    assert json_text({"v": [1.5, None, math.inf]}) == '{\n  "v": [\n    1.5,\n    null,\n    null\n  ]\n}\n'


def test_scenario_electron_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert cli.main(["scenario", "electron", "--out", str(a)]) == 0
    assert cli.main(["scenario", "electron", "--out", str(b)]) == 0
    names = sorted(p.name for p in a.iterdir())
    assert names == ["discrepancies.json", "field.csv", "kk.csv", "kk_summary.json",
                     "scales.json", "zeros.csv"]
    for n in names:
        raw = (a / n).read_bytes()
        assert raw == (b / n).read_bytes(), n
        assert b"\r" not in raw
    assert (a / "scales.json").read_bytes() == (GOLDEN / "electron" / "scales.json").read_bytes()
    summary = json.loads((a / "kk_summary.json").read_text())
    assert summary["converged"] and summary["max_err"] < 0.03
    rows = list(csv.DictReader(io.StringIO((a / "zeros.csv").read_text())))
    assert len(rows) == 40 and all(r["half_plane"] == "upper" for r in rows)


def test_scenario_classical(tmp_path):
    assert cli.main(["scenario", "classical", "--out", str(tmp_path)]) == 0
    rep = json.loads((tmp_path / "classical.json").read_text())
    assert rep["rate"] == pytest.approx(2e23, rel=1e-12)
    assert rep["total_phase"] == pytest.approx(1e32, rel=1e-12)
    assert not (tmp_path / "kk.csv").exists() and not (tmp_path / "field.csv").exists()
    disc = json.loads((tmp_path / "discrepancies.json").read_text())
    assert {d["quantity"] for d in disc} >= {"molecule t_d", "classical E"}


def test_field_electron(tmp_path, electron):
    p = electron.params
    x, t, mod, ph = cli.field_grid(p, (-30, 0), (0, 10), 301, 101)
    assert np.all(mod[:, -1] == 0) and np.all(ph[:, -1] == 0)
    assert x[np.argmax(mod[0])] == pytest.approx(p.a, abs=0.15)
    # after reflection the mirrored centre moves left at K/m
    w = mod**2

    def centroid(k):
        return (w[k] * x).sum() / w[k].sum()

    v = (centroid(100) - centroid(80)) / (t[100] - t[80])
    assert v == pytest.approx(-p.K / p.m, rel=0.02)


def test_field_cap(electron):
    with pytest.raises(cli.InputError):
        cli.field_grid(electron.params, (-1, 0), (0, 1), 10**5, 10**4)


def test_zeros_command(tmp_path, m_params):
    out = tmp_path / "z.csv"
    assert cli.main(["zeros", "--params", m_params, "--x", "-4", "--n-min", "1",
                     "--n-max", "20", "--out", str(out)]) == 0
    rows = list(csv.DictReader(io.StringIO(out.read_text())))
    assert sum(r["half_plane"] == "lower" for r in rows) == 12


def test_threshold_command(e_params, capsys):
    assert cli.main(["threshold", "--params", e_params, "--x", "-1.5"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["analytic"] is True and rep["lower_half_count"] == 0


def test_kk_command(tmp_path, e_params):
    out = tmp_path / "kk"
    assert cli.main(["kk", "--params", e_params, "--x", "-1.5", "--t-min", "-400", "--t-max", "400",
                     "--samples", "4096", "--eval-min", "0", "--eval-max", "20", "--out", str(out)]) == 0
    summary = json.loads((out / "kk_summary.json").read_text())
    assert summary["max_err"] < 0.03
    assert (out / "kk.csv").read_text().startswith("t,log_mod,raw_phase")


@pytest.mark.parametrize("argv,code", [
    (["threshold", "--params", "missing.json", "--x", "-1"], 2),
    (["threshold", "--params", "{e}", "--x", "1.0"], 2),
    (["zeros", "--params", "{e}", "--x", "-1.5", "--n-min", "3", "--n-max", "1"], 2),
    (["kk", "--params", "{e}", "--x", "-1.5", "--t-min", "-20", "--t-max", "20", "--samples", "512"], 2),
    (["kk", "--params", "{m}", "--x", "-4", "--t-min=-1.5e6", "--t-max=1.5e6",
      "--samples", "1024"], 4),
    (["classical", "--params", "{e}", "--x", "-1.5"], 4),
    (["field", "--params", "{d}", "--nx", "11", "--nt", "2"], 3),
    (["kk", "--params", "{m}", "--x", "-4", "--t-min=-1.5e6", "--t-max=1.5e6",
      "--samples", "64", "--tail-order", "6", "--blaschke"], 3),
])
def test_exit_codes(tmp_path, e_params, m_params, argv, code):
    d_params = params_file(tmp_path, "degenerate", m=1.0, a=-1e-9, K=1e-9, delta=1.0)
    argv = [a.format(e=e_params, m=m_params, d=d_params) for a in argv]
    assert cli.main(argv) == code


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as exc:
        cli.main(["scenario", "proton", "--out", "x"])
    assert exc.value.code == 2


def test_console_entry_point(tmp_path, e_params):
    r = subprocess.run([sys.executable, "-m", "wavekk.cli", "threshold", "--params", e_params,
                        "--x", "-1.5"], capture_output=True, text=True)
    assert r.returncode == 0 and '"analytic": true' in r.stdout
    r = subprocess.run([sys.executable, "-m", "wavekk.cli", "threshold", "--params", e_params,
                        "--x", "2"], capture_output=True, text=True)
    assert r.returncode == 2 and "error" in r.stderr
